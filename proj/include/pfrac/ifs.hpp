#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pfrac {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// w(v) = [[a, b], [c, d]] v + [e, f]
struct AffineMap {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double e = 0.0, f = 0.0;

    Point2 operator()(Point2 v) const noexcept {
        return {a * v.x + b * v.y + e, c * v.x + d * v.y + f};
    }

    double det() const noexcept { return a * d - b * c; }
    bool finite() const noexcept;

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

Point2 apply_map(const AffineMap& m, Point2 v) noexcept;

/// Singular values of the 2x2 linear part, largest first.
struct SingularValues {
    double major = 0.0;
    double minor = 0.0;
};

SingularValues singular_values(const AffineMap& m) noexcept;

struct IfsCode {
    std::vector<AffineMap> maps;
    std::vector<double> probs;

    std::size_t size() const noexcept { return maps.size(); }

    /// Throws InvalidParams when the invariants do not hold.
    void validate() const;

    friend bool operator==(const IfsCode&, const IfsCode&) = default;
};

struct SigmaTarget {
    double target = 3.5;
    double tolerance = 1e-6;

    void validate() const;
};

inline constexpr int default_map_count = 2;
inline constexpr int max_map_count = 8;
inline constexpr int search_attempt_budget = 10'000;

/// Complexity measure: sum over maps of (s_major + 2 s_minor).
double sigma_factor(const IfsCode& code) noexcept;

/// p_j proportional to max(|det A_j|, 0.01), normalized.
std::vector<double> determinant_probs(std::span<const AffineMap> maps);

/// Draws an IFS whose sigma factor hits `sigma.target` within tolerance.
/// Deterministic in (n_maps, sigma, seed). Throws SearchExhausted.
IfsCode sample_ifs(int n_maps, SigmaTarget sigma, std::uint64_t seed);

/// `count` pairwise distinct codes, each meeting the sigma constraint.
/// Code i equals sample_ifs(n_maps, sigma, (*code_seeds)[i]) when `code_seeds` is given.
std::vector<IfsCode> search_category_set(int count, int n_maps, SigmaTarget sigma,
                                         std::uint64_t seed,
                                         std::vector<std::uint64_t>* code_seeds = nullptr);

/// Canonical JSON document: {"maps":[...],"probs":[...],"sigma":...,"seed":...}.
std::string ifs_to_json(const IfsCode& code, std::uint64_t seed);

struct IfsDocument {
    IfsCode code;
    std::uint64_t seed = 0;
};

/// Parses an IFS JSON document; the stored sigma is informational only.
IfsDocument ifs_from_json(const std::string& text);

}  // namespace pfrac
