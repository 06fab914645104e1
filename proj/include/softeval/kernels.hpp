#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

// Column-level arithmetic kernels with a scalar reference implementation and
// SIMD variants (AVX2 on x86-64, NEON on AArch64) selected at runtime.
//
// Every variant reduces in the same canonical order, so all backends return
// bit-identical results for identical input:
//   - elements [0, n - n % 4) are accumulated into four lane sums, element i
//     going to lane i % 4, each lane summed left to right;
//   - the lanes are combined as (lane0 + lane1) + (lane2 + lane3);
//   - the trailing n % 4 elements are then added left to right.
// The order does not depend on the machine or thread count.

namespace softeval::kernels {

enum class Backend { scalar, avx2, neon };

/// Fuzzy cardinalities of one column pair.
struct MassSums {
    double intersection{};  ///< sum of min(pred_i, ref_i)
    double pred{};          ///< sum of pred_i
    double ref{};           ///< sum of ref_i
};

/// Confusion counts after strict-threshold binarization of both sides.
struct Counts {
    std::uint64_t tp{};
    std::uint64_t fp{};
    std::uint64_t fn{};
};

/// Function table of one backend.
struct KernelTable {
    Backend backend;
    MassSums (*soft_sums)(const double* pred, const double* ref, std::size_t n);
    Counts (*hard_counts)(const double* pred, double pred_tau, const double* ref, double ref_tau, std::size_t n);
    void (*binarize)(const double* values, double tau, double* out, std::size_t n);
};

[[nodiscard]] std::string_view backend_name(Backend b) noexcept;
[[nodiscard]] std::optional<Backend> parse_backend(std::string_view name) noexcept;

/// Whether the backend was compiled in and the running CPU supports it.
[[nodiscard]] bool backend_supported(Backend b) noexcept;

/// Best supported backend, unless SOFTEVAL_KERNEL names another supported one.
[[nodiscard]] Backend active_backend() noexcept;

/// Overrides the runtime selection; throws config_error for unsupported backends.
void set_backend(Backend b);

/// Direct access to a backend's table, for equivalence tests and benchmarks.
[[nodiscard]] const KernelTable& table(Backend b);

// Dispatched entry points. Spans must have equal length; callers check.
[[nodiscard]] MassSums soft_sums(std::span<const double> pred, std::span<const double> ref);
[[nodiscard]] Counts hard_counts(std::span<const double> pred, double pred_tau, std::span<const double> ref,
                                 double ref_tau);
void binarize(std::span<const double> values, double tau, std::span<double> out);

}  // namespace softeval::kernels
