#include "softeval/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"

#include "softeval/errors.hpp"

namespace softeval {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string fixed6(double v) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof(buf), "%.6f", v);
    return {buf, static_cast<std::size_t>(len)};
}

std::string join_limited(const std::vector<std::string>& names) {
    constexpr std::size_t limit = 10;
    std::string out;
    for (std::size_t i = 0; i < names.size() && i < limit; ++i) {
        out += (i ? ", " : "") + names[i];
    }
    if (names.size() > limit) {
        out += " and " + std::to_string(names.size() - limit) + " more";
    }
    return out;
}

ordered_json to_json(const std::optional<JackknifeSummary>& j) {
    if (!j) {
        return nullptr;
    }
    return ordered_json{{"estimate", j->estimate},       {"standard_error", j->standard_error},
                        {"ci_low", j->ci_low},           {"ci_high", j->ci_high},
                        {"confidence", j->confidence},   {"n", j->n}};
}

std::optional<JackknifeSummary> jackknife_from_json(const ordered_json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    JackknifeSummary s;
    s.estimate = j.at("estimate").get<double>();
    s.standard_error = j.at("standard_error").get<double>();
    s.ci_low = j.at("ci_low").get<double>();
    s.ci_high = j.at("ci_high").get<double>();
    s.confidence = j.at("confidence").get<double>();
    s.n = j.at("n").get<std::size_t>();
    return s;
}

ordered_json to_json(const ScoreEntry& e) {
    return ordered_json{{"scope", e.scope},         {"precision", e.precision},   {"recall", e.recall},
                        {"f_score", e.f_score},     {"degenerate", e.degenerate}, {"f_jackknife", to_json(e.f_jackknife)}};
}

ScoreEntry entry_from_json(const ordered_json& j) {
    return {j.at("scope").get<std::string>(),   j.at("precision").get<double>(),
            j.at("recall").get<double>(),       j.at("f_score").get<double>(),
            j.at("degenerate").get<std::string>(), jackknife_from_json(j.at("f_jackknife"))};
}

ordered_json thresholds_json(const ThresholdVector& tv) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : tv.entries()) {
        arr.push_back({{"class", e.class_name}, {"tau", e.tau}, {"unscorable", e.unscorable}});
    }
    return arr;
}

ThresholdVector thresholds_from(const ordered_json& arr) {
    std::vector<ClassThreshold> entries;
    for (const auto& e : arr) {
        entries.push_back({e.at("class").get<std::string>(), e.at("tau").get<double>(), e.at("unscorable").get<bool>()});
    }
    return ThresholdVector(std::move(entries));
}

}  // namespace

SoftLabelMatrix parse_matrix(std::string_view text, const std::string& source,
                             const std::optional<std::vector<std::string>>& expected_classes) {
    auto lines = split_lines(text);
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw parse_error(source + ": empty file, expected header 'item_id,<classes...>'");
    }
    const auto header = split_fields(lines.front());
    if (header.front() != "item_id") {
        throw parse_error(source + ": header must start with 'item_id'");
    }
    if (header.size() < 2) {
        throw parse_error(source + ": header lists no classes");
    }
    std::vector<std::string> classes(header.begin() + 1, header.end());
    for (const auto& c : classes) {
        if (c.empty()) {
            throw parse_error(source + ": empty class name in header");
        }
    }
    if (expected_classes) {
        for (const auto& c : *expected_classes) {
            if (std::find(classes.begin(), classes.end(), c) == classes.end()) {
                throw parse_error(source + ": missing expected class '" + c + "'");
            }
        }
    }

    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::set<std::string> seen;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const std::string where = source + ":" + std::to_string(ln + 1);
        if (lines[ln].empty()) {
            throw parse_error(where + ": blank line inside data");
        }
        const auto fields = split_fields(lines[ln]);
        if (fields.size() != header.size()) {
            throw parse_error(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(fields.size()));
        }
        std::string id(fields.front());
        if (id.empty()) {
            throw parse_error(where + ": empty item_id");
        }
        if (!seen.insert(id).second) {
            throw parse_error(where + ": duplicate item_id '" + id + "'");
        }
        std::vector<double> row(classes.size());
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto field = fields[c + 1];
            double v = 0.0;
            const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
                throw parse_error(where + ": non-numeric value '" + std::string(field) + "' at row '" + id +
                                  "', class '" + classes[c] + "'");
            }
            if (!(v >= 0.0 && v <= 1.0)) {
                throw parse_error(where + ": value " + std::string(field) + " outside [0, 1] at row '" + id +
                                  "', class '" + classes[c] + "'");
            }
            row[c] = v;
        }
        ids.push_back(std::move(id));
        rows.push_back(std::move(row));
    }
    return SoftLabelMatrix::from_rows(std::move(ids), std::move(classes), rows);
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, std::string_view content) {
    if (path == "-") {
        std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw io_error("failed writing '" + path + "'");
    }
}

SoftLabelMatrix read_matrix(const std::string& path, const std::optional<std::vector<std::string>>& expected_classes) {
    return parse_matrix(read_text(path), path == "-" ? "<stdin>" : path, expected_classes);
}

std::string format_matrix(const SoftLabelMatrix& m) {
    std::string out = "item_id";
    for (const auto& c : m.class_names()) {
        out += ',';
        out += c;
    }
    out += '\n';
    for (std::size_t i = 0; i < m.n_items(); ++i) {
        out += m.item_ids()[i];
        for (std::size_t c = 0; c < m.n_classes(); ++c) {
            out += ',';
            out += shortest(m.at(i, c));
        }
        out += '\n';
    }
    return out;
}

void write_matrix(const std::string& path, const SoftLabelMatrix& m) {
    write_text(path, format_matrix(m));
}

std::pair<SoftLabelMatrix, SoftLabelMatrix> align(const SoftLabelMatrix& pred, const SoftLabelMatrix& ref,
                                                  const std::optional<ClassSubset>& subset) {
    if (subset) {
        (void)subset->resolve(pred);
        (void)subset->resolve(ref);
    } else {
        const std::set<std::string> pc(pred.class_names().begin(), pred.class_names().end());
        const std::set<std::string> rc(ref.class_names().begin(), ref.class_names().end());
        if (pc != rc) {
            std::vector<std::string> diff;
            std::set_symmetric_difference(pc.begin(), pc.end(), rc.begin(), rc.end(), std::back_inserter(diff));
            throw alignment_error("class sets differ: " + join_limited(diff));
        }
    }

    std::vector<std::string> only_pred, only_ref;
    for (const auto& id : pred.item_ids()) {
        if (!ref.item_index(id)) {
            only_pred.push_back(id);
        }
    }
    for (const auto& id : ref.item_ids()) {
        if (!pred.item_index(id)) {
            only_ref.push_back(id);
        }
    }
    if (!only_pred.empty() || !only_ref.empty()) {
        std::string msg = "items do not match";
        if (!only_ref.empty()) {
            msg += "; missing from prediction: " + join_limited(only_ref);
        }
        if (!only_pred.empty()) {
            msg += "; missing from reference: " + join_limited(only_pred);
        }
        throw alignment_error(msg);
    }

    if (pred.item_ids() == ref.item_ids()) {
        return {pred, ref};
    }
    SoftLabelMatrix reordered(ref.item_ids(), pred.class_names());
    for (std::size_t i = 0; i < ref.n_items(); ++i) {
        const std::size_t src = *pred.item_index(ref.item_ids()[i]);
        for (std::size_t c = 0; c < pred.n_classes(); ++c) {
            reordered.set(i, c, pred.at(src, c));
        }
    }
    return {std::move(reordered), ref};
}

std::string write_report(const EvalReport& report, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::string out = "mode,scope,precision,recall,f_score,degenerate\n";
        auto row = [&](const std::string& mode, const ScoreEntry& e) {
            out += mode + ',' + e.scope + ',' + fixed6(e.precision) + ',' + fixed6(e.recall) + ',' + fixed6(e.f_score) +
                   ',' + e.degenerate + '\n';
        };
        for (const auto& m : report.modes) {
            for (const auto& e : m.per_class) {
                row(m.mode, e);
            }
            row(m.mode, m.micro);
            if (m.macro) {
                row(m.mode, *m.macro);
            } else {
                out += m.mode + ",macro,,,,both_empty\n";
            }
        }
        return out;
    }

    const auto& md = report.metadata;
    ordered_json meta{{"tool", md.tool},
                      {"predictions", md.predictions},
                      {"reference", md.reference},
                      {"classes", md.classes},
                      {"modes", md.modes},
                      {"reference_threshold", md.reference_threshold},
                      {"kl_direction", md.kl_direction},
                      {"kl_clip", md.kl_clip},
                      {"ot_tuning", md.ot_tuning},
                      {"jackknife_unit", md.jackknife_unit},
                      {"confidence", md.confidence},
                      {"kernel_backend", md.kernel_backend},
                      {"prng", md.prng},
                      {"seed", md.seed ? ordered_json(*md.seed) : ordered_json(nullptr)}};
    ordered_json modes = ordered_json::array();
    for (const auto& m : report.modes) {
        ordered_json per_class = ordered_json::array();
        for (const auto& e : m.per_class) {
            per_class.push_back(to_json(e));
        }
        modes.push_back({{"mode", m.mode},
                         {"per_class", per_class},
                         {"micro", to_json(m.micro)},
                         {"macro", m.macro ? to_json(*m.macro) : ordered_json(nullptr)},
                         {"macro_classes_scored", m.macro_classes_scored}});
    }
    ordered_json root{{"metadata", meta},
                      {"kld", report.kld},
                      {"kld_jackknife", to_json(report.kld_jackknife)},
                      {"modes", modes},
                      {"thresholds", report.thresholds ? thresholds_json(*report.thresholds) : ordered_json(nullptr)}};
    return root.dump(2) + "\n";
}

EvalReport parse_report_json(std::string_view text) {
    try {
        const auto root = ordered_json::parse(text);
        EvalReport r;
        const auto& md = root.at("metadata");
        r.metadata.tool = md.at("tool").get<std::string>();
        r.metadata.predictions = md.at("predictions").get<std::vector<std::string>>();
        r.metadata.reference = md.at("reference").get<std::string>();
        r.metadata.classes = md.at("classes").get<std::vector<std::string>>();
        r.metadata.modes = md.at("modes").get<std::vector<std::string>>();
        r.metadata.reference_threshold = md.at("reference_threshold").get<double>();
        r.metadata.kl_direction = md.at("kl_direction").get<std::string>();
        r.metadata.kl_clip = md.at("kl_clip").get<double>();
        r.metadata.ot_tuning = md.at("ot_tuning").get<std::string>();
        r.metadata.jackknife_unit = md.at("jackknife_unit").get<std::string>();
        r.metadata.confidence = md.at("confidence").get<double>();
        r.metadata.kernel_backend = md.at("kernel_backend").get<std::string>();
        r.metadata.prng = md.at("prng").get<std::string>();
        if (!md.at("seed").is_null()) {
            r.metadata.seed = md.at("seed").get<std::uint64_t>();
        }
        r.kld = root.at("kld").get<double>();
        r.kld_jackknife = jackknife_from_json(root.at("kld_jackknife"));
        for (const auto& m : root.at("modes")) {
            ModeReport mr;
            mr.mode = m.at("mode").get<std::string>();
            for (const auto& e : m.at("per_class")) {
                mr.per_class.push_back(entry_from_json(e));
            }
            mr.micro = entry_from_json(m.at("micro"));
            if (!m.at("macro").is_null()) {
                mr.macro = entry_from_json(m.at("macro"));
            }
            mr.macro_classes_scored = m.at("macro_classes_scored").get<std::size_t>();
            r.modes.push_back(std::move(mr));
        }
        if (!root.at("thresholds").is_null()) {
            r.thresholds = thresholds_from(root.at("thresholds"));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed report JSON: ") + e.what());
    }
}

std::string thresholds_to_json(const ThresholdVector& tv) {
    return ordered_json{{"thresholds", thresholds_json(tv)}}.dump(2) + "\n";
}

ThresholdVector thresholds_from_json(std::string_view text) {
    try {
        return thresholds_from(ordered_json::parse(text).at("thresholds"));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed thresholds JSON: ") + e.what());
    }
}

}  // namespace softeval
