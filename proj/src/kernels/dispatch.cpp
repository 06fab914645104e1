#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "softeval/errors.hpp"

namespace softeval::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect() noexcept {
    if (const char* env = std::getenv("SOFTEVAL_KERNEL")) {
        if (auto b = parse_backend(env); b && backend_supported(*b)) {
            return *b;
        }
    }
    if (backend_supported(Backend::avx2)) {
        return Backend::avx2;
    }
    if (backend_supported(Backend::neon)) {
        return Backend::neon;
    }
    return Backend::scalar;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{nullptr};
    return slot;
}

const KernelTable& active_table() noexcept {
    const KernelTable* t = active_slot().load(std::memory_order_acquire);
    if (t == nullptr) {
        t = &table(detect());
        active_slot().store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
    if (name == "scalar") {
        return Backend::scalar;
    }
    if (name == "avx2") {
        return Backend::avx2;
    }
    if (name == "neon") {
        return Backend::neon;
    }
    return std::nullopt;
}

bool backend_supported(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return cpu_has_avx2();
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept {
    return active_table().backend;
}

void set_backend(Backend b) {
    active_slot().store(&table(b), std::memory_order_release);
}

const KernelTable& table(Backend b) {
    if (!backend_supported(b)) {
        throw config_error("kernel backend '" + std::string(backend_name(b)) + "' is not supported on this machine");
    }
    switch (b) {
        case Backend::scalar:
            break;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return detail::avx2_table;
#else
            break;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return detail::neon_table;
#else
            break;
#endif
    }
    return detail::scalar_table;
}

MassSums soft_sums(std::span<const double> pred, std::span<const double> ref) {
    return active_table().soft_sums(pred.data(), ref.data(), pred.size());
}

Counts hard_counts(std::span<const double> pred, double pred_tau, std::span<const double> ref, double ref_tau) {
    return active_table().hard_counts(pred.data(), pred_tau, ref.data(), ref_tau, pred.size());
}

void binarize(std::span<const double> values, double tau, std::span<double> out) {
    active_table().binarize(values.data(), tau, out.data(), values.size());
}

}  // namespace softeval::kernels
