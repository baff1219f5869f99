#include "pfrac/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "pfrac/errors.hpp"
#include "pfrac/json_canonical.hpp"
#include "pfrac/rng.hpp"

namespace pfrac {

bool AffineMap::finite() const noexcept {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d) &&
           std::isfinite(e) && std::isfinite(f);
}

Point2 apply_map(const AffineMap& m, Point2 v) noexcept { return m(v); }

SingularValues singular_values(const AffineMap& m) noexcept {
    // Closed form via the rotation/reflection split of a 2x2 matrix.
    const double e = 0.5 * (m.a + m.d);
    const double f = 0.5 * (m.a - m.d);
    const double g = 0.5 * (m.c + m.b);
    const double h = 0.5 * (m.c - m.b);
    const double q = std::hypot(e, h);
    const double r = std::hypot(f, g);
    return {q + r, std::abs(q - r)};
}

void IfsCode::validate() const {
    if (maps.empty()) {
        throw InvalidParams("IFS code needs at least one map");
    }
    if (maps.size() != probs.size()) {
        throw InvalidParams("IFS code has " + std::to_string(maps.size()) + " maps but " +
                            std::to_string(probs.size()) + " probabilities");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < maps.size(); ++j) {
        if (!maps[j].finite()) {
            throw InvalidParams("map " + std::to_string(j) + " has a non-finite coefficient");
        }
        if (!(probs[j] >= 0.0) || !std::isfinite(probs[j])) {
            throw InvalidParams("probability " + std::to_string(j) + " is negative or non-finite");
        }
        total += probs[j];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidParams("probabilities sum to " + std::to_string(total));
    }
}

void SigmaTarget::validate() const {
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw InvalidParams("sigma target must be positive");
    }
    if (!(tolerance >= 0.0)) {
        throw InvalidParams("sigma tolerance must be non-negative");
    }
}

double sigma_factor(const IfsCode& code) noexcept {
    double sigma = 0.0;
    for (const auto& m : code.maps) {
        const auto s = singular_values(m);
        sigma += s.major + 2.0 * s.minor;
    }
    return sigma;
}

std::vector<double> determinant_probs(std::span<const AffineMap> maps) {
    std::vector<double> probs(maps.size());
    double total = 0.0;
    for (std::size_t j = 0; j < maps.size(); ++j) {
        probs[j] = std::max(std::abs(maps[j].det()), 0.01);
        total += probs[j];
    }
    for (auto& p : probs) {
        p /= total;
    }
    return probs;
}

namespace {

// Largest per-map share: s_major = s_minor = 1.
constexpr double max_share = 3.0;
constexpr double min_share = 0.5;

// One candidate. The target is split into per-map shares c_j = s1 + 2 s2,
// each share is resolved into singular values analytically, and the
// linear part is R(theta) diag(s1, s2) R(phi) diag(+-1, +-1).
std::optional<IfsCode> draw_candidate(Rng& rng, int n_maps, double target) {
    // Half the even split keeps a non-empty range for every share.
    const double floor_share = std::min(min_share, 0.5 * target / n_maps);
    std::vector<AffineMap> maps;
    maps.reserve(static_cast<std::size_t>(n_maps));
    double remaining = target;
    for (int j = 0; j < n_maps; ++j) {
        const int left = n_maps - j - 1;
        double share = remaining;
        if (left > 0) {
            const double lo = std::max(floor_share, remaining - max_share * left);
            const double hi = std::min(max_share, remaining - floor_share * left);
            if (lo > hi) {
                return std::nullopt;
            }
            share = rng.uniform(lo, hi);
        } else if (share > max_share || share <= 0.0) {
            return std::nullopt;
        }
        remaining -= share;

        const double s_major = rng.uniform(share / 3.0, std::min(1.0, share));
        const double s_minor = std::max(0.0, 0.5 * (share - s_major));
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double flip_x = rng.below(2) == 0 ? 1.0 : -1.0;
        const double flip_y = rng.below(2) == 0 ? 1.0 : -1.0;

        const double ct = std::cos(theta), st = std::sin(theta);
        const double cp = std::cos(phi), sp = std::sin(phi);
        // R(theta) * diag(s1, s2)
        const double m00 = ct * s_major, m01 = -st * s_minor;
        const double m10 = st * s_major, m11 = ct * s_minor;
        // ... * R(phi) * diag(flip_x, flip_y)
        AffineMap m;
        m.a = (m00 * cp + m01 * sp) * flip_x;
        m.b = (-m00 * sp + m01 * cp) * flip_y;
        m.c = (m10 * cp + m11 * sp) * flip_x;
        m.d = (-m10 * sp + m11 * cp) * flip_y;
        m.e = rng.uniform(-1.0, 1.0);
        m.f = rng.uniform(-1.0, 1.0);
        maps.push_back(m);
    }
    IfsCode code;
    code.probs = determinant_probs(maps);
    code.maps = std::move(maps);
    return code;
}

}  // namespace

IfsCode sample_ifs(int n_maps, SigmaTarget sigma, std::uint64_t seed) {
    if (n_maps < 1) {
        throw InvalidParams("n_maps must be >= 1");
    }
    sigma.validate();
    Rng rng(derive_seed(seed, stream::search));
    for (int attempt = 0; attempt < search_attempt_budget; ++attempt) {
        auto candidate = draw_candidate(rng, n_maps, sigma.target);
        if (candidate && std::abs(sigma_factor(*candidate) - sigma.target) <= sigma.tolerance) {
            return std::move(*candidate);
        }
    }
    throw SearchExhausted("no IFS with sigma " + std::to_string(sigma.target) + " +- " +
                          std::to_string(sigma.tolerance) + " for " + std::to_string(n_maps) +
                          " maps after " + std::to_string(search_attempt_budget) + " candidates");
}

std::vector<IfsCode> search_category_set(int count, int n_maps, SigmaTarget sigma,
                                         std::uint64_t seed, std::vector<std::uint64_t>* code_seeds) {
    if (count < 1) {
        throw InvalidParams("category count must be >= 1");
    }
    std::vector<IfsCode> codes;
    codes.reserve(static_cast<std::size_t>(count));
    if (code_seeds) {
        code_seeds->clear();
    }
    std::uint64_t stream_index = 0;
    int duplicates = 0;
    while (static_cast<int>(codes.size()) < count) {
        const std::uint64_t code_seed = derive_seed(seed, stream_index++);
        auto code = sample_ifs(n_maps, sigma, code_seed);
        if (std::find(codes.begin(), codes.end(), code) != codes.end()) {
            if (++duplicates >= search_attempt_budget) {
                throw SearchExhausted("could not find " + std::to_string(count) +
                                      " distinct IFS codes");
            }
            continue;
        }
        codes.push_back(std::move(code));
        if (code_seeds) {
            code_seeds->push_back(code_seed);
        }
    }
    return codes;
}

std::string ifs_to_json(const IfsCode& code, std::uint64_t seed) {
    Json doc;
    Json maps = Json::array();
    for (const auto& m : code.maps) {
        maps.push_back(Json{{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}, {"e", m.e}, {"f", m.f}});
    }
    doc["maps"] = std::move(maps);
    doc["probs"] = code.probs;
    doc["sigma"] = sigma_factor(code);
    doc["seed"] = seed;
    return dump_canonical(doc);
}

IfsDocument ifs_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw InvalidParams(std::string("IFS JSON does not parse: ") + e.what());
    }
    IfsDocument out;
    try {
        for (const auto& m : doc.at("maps")) {
            out.code.maps.push_back({json_number(m.at("a")), json_number(m.at("b")),
                                     json_number(m.at("c")), json_number(m.at("d")),
                                     json_number(m.at("e")), json_number(m.at("f"))});
        }
        for (const auto& p : doc.at("probs")) {
            out.code.probs.push_back(json_number(p));
        }
        if (doc.contains("seed")) {
            out.seed = doc.at("seed").get<std::uint64_t>();
        }
    } catch (const std::exception& e) {
        throw InvalidParams(std::string("malformed IFS JSON: ") + e.what());
    }
    out.code.validate();
    return out;
}

}  // namespace pfrac
