#include "crtarmor/modular.hpp"

#include <cmath>
#include <string>

namespace crtarmor {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// Extended Euclid: returns gcd(a, b) and x, y with a*x + b*y = gcd.
std::int64_t xgcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        const std::int64_t q = a / b;
        std::int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    x = x0;
    y = y0;
    return a;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    const u128 p = static_cast<u128>(a) * b;
    if (p > UINT64_MAX) raise(Errc::Overflow, "modulus product exceeds 64 bits");
    return static_cast<std::uint64_t>(p);
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t ModulusSystem::coprime_range() const {
    std::uint64_t range = 1;
    for (std::size_t l = 0; l < K; ++l) range = checked_mul(range, M[l]);
    return range;
}

ModulusSystem validate_system(std::size_t n_integers, double delta,
                              std::vector<std::uint64_t> M, std::size_t K) {
    if (M.empty()) raise(Errc::InvalidArgument, "empty modulus list");
    if (n_integers == 0) raise(Errc::InvalidArgument, "need at least one unknown integer");
    if (!(delta > 0.0)) raise(Errc::InvalidArgument, "delta must be positive");
    if (K == 0 || K > M.size()) raise(Errc::InvalidArgument, "K must satisfy 1 <= K <= L");

    for (std::size_t l = 0; l < M.size(); ++l) {
        if (M[l] < 2) raise(Errc::InvalidArgument, "modulus entries must be >= 2");
        if (l > 0 && M[l] <= M[l - 1])
            raise(Errc::NotAscending, "M[" + std::to_string(l) + "] = " + std::to_string(M[l]) +
                                          " does not exceed its predecessor");
    }
    for (std::size_t a = 0; a < M.size(); ++a)
        for (std::size_t b = a + 1; b < M.size(); ++b)
            if (gcd_u64(M[a], M[b]) != 1)
                raise(Errc::NotCoprime, std::to_string(M[a]) + " and " + std::to_string(M[b]) +
                                            " share factor " + std::to_string(gcd_u64(M[a], M[b])));

    const double gamma_real = 4.0 * static_cast<double>(n_integers) * delta;
    const double rounded = std::round(gamma_real);
    if (std::fabs(gamma_real - rounded) > 1e-9 || rounded < 1.0)
        raise(Errc::NonIntegerGamma, "4*N*delta = " + std::to_string(gamma_real));

    ModulusSystem sys;
    sys.n_integers = n_integers;
    sys.delta = delta;
    sys.gamma = static_cast<std::uint64_t>(rounded);
    sys.M = std::move(M);
    sys.K = K;
    sys.m.reserve(sys.M.size());
    for (const std::uint64_t coprime_part : sys.M)
        sys.m.push_back(checked_mul(sys.gamma, coprime_part));
    return sys;
}

std::uint64_t crt_reconstruct(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues) {
    if (residues.empty()) raise(Errc::EmptyInput, "no residues to merge");

    std::uint64_t value = residues.front().first % residues.front().second;
    std::uint64_t modulus = residues.front().second;

    for (std::size_t i = 1; i < residues.size(); ++i) {
        const std::uint64_t v2 = residues[i].first % residues[i].second;
        const std::uint64_t m2 = residues[i].second;
        if (gcd_u64(modulus, m2) != 1)
            raise(Errc::NotCoprime, "merged modulus " + std::to_string(modulus) +
                                        " shares a factor with " + std::to_string(m2));

        // value + modulus * t == v2 (mod m2)
        std::int64_t inv, unused;
        xgcd(static_cast<std::int64_t>(modulus % m2), static_cast<std::int64_t>(m2), inv, unused);
        i128 diff = static_cast<i128>(v2) - static_cast<i128>(value % m2);
        diff %= static_cast<i128>(m2);
        if (diff < 0) diff += m2;
        i128 t = (diff * inv) % static_cast<i128>(m2);
        if (t < 0) t += m2;

        const std::uint64_t merged_modulus = checked_mul(modulus, m2);
        const u128 merged = static_cast<u128>(value) + static_cast<u128>(modulus) * static_cast<u128>(t);
        value = static_cast<std::uint64_t>(merged % merged_modulus);
        modulus = merged_modulus;
    }
    return value;
}

WrappedValue common_residue(double r, std::uint64_t gamma) {
    if (gamma == 0) raise(Errc::InvalidArgument, "zero modulus");
    const double g = static_cast<double>(gamma);
    double w = r - g * std::floor(r / g);
    if (w >= g) w -= g;
    if (w < 0.0) w += g;
    return {w, gamma};
}

double circle_distance(double x, double y, std::uint64_t gamma) {
    const double w = common_residue(x - y, gamma).value;
    const double g = static_cast<double>(gamma);
    return std::min(w, g - w);
}

}  // namespace crtarmor
