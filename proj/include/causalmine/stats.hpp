#pragma once

#include <cmath>
#include <cstdint>

namespace causalmine {

/// Confidence levels supported by the interval tests.
enum class Confidence { pct95, pct99 };

inline double critical_value(Confidence c) {
    return c == Confidence::pct95 ? 1.96 : 2.576;
}

struct Interval {
    double low = 0.0;
    double high = 0.0;
    bool contains(double x) const { return low <= x && x <= high; }
};

/// 2x2 support table of a rule p -> t over the full data set, in the usual
/// epidemiological layout:
///
///            t      !t
///    p       a       b
///    !p      c       d
///
/// Cells hold raw counts; zero cells are substituted by 1 inside the
/// statistics only, never in the stored table.
struct ContingencyTable {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    std::uint64_t d = 0;

    std::uint64_t n() const { return a + b + c + d; }
    std::uint64_t row_p() const { return a + b; }
    std::uint64_t col_t() const { return a + c; }
};

namespace detail {
inline double nz(std::uint64_t cell) { return cell == 0 ? 1.0 : static_cast<double>(cell); }
}

/// (a*d)/(b*c) with zero cells replaced by 1, so the result is always finite
/// and positive.
inline double odds_ratio(const ContingencyTable& t) {
    return (detail::nz(t.a) * detail::nz(t.d)) / (detail::nz(t.b) * detail::nz(t.c));
}

/// Wald interval for the odds ratio on the log scale:
///   exp(ln w -+ z' * sqrt(1/a + 1/b + 1/c + 1/d))
inline Interval or_confidence_interval(const ContingencyTable& t, Confidence conf) {
    const double a = detail::nz(t.a), b = detail::nz(t.b);
    const double c = detail::nz(t.c), d = detail::nz(t.d);
    const double w = (a * d) / (b * c);
    const double s = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
    const double z = critical_value(conf);
    return {std::exp(std::log(w) - z * s), std::exp(std::log(w) + z * s)};
}

/// The association is significantly positive: the whole interval lies above 1.
inline bool significant_positive(const ContingencyTable& t, Confidence conf) {
    return or_confidence_interval(t, conf).low > 1.0;
}

/// The interval excludes 1 on either side. Used for the relevance screen.
inline bool associated_two_sided(const ContingencyTable& t, Confidence conf) {
    const Interval ci = or_confidence_interval(t, conf);
    return ci.low > 1.0 || ci.high < 1.0;
}

/// Outcome counts over matched record pairs (exposed member vs non-exposed
/// member):
///   n11 both positive, n12 exposed-only positive,
///   n21 non-exposed-only positive, n22 neither positive.
struct MatchedPairTable {
    std::uint64_t n11 = 0;
    std::uint64_t n12 = 0;
    std::uint64_t n21 = 0;
    std::uint64_t n22 = 0;

    std::uint64_t pairs() const { return n11 + n12 + n21 + n22; }
    std::uint64_t discordant() const { return n12 + n21; }
};

/// n12/n21 with zero cells replaced by 1. Only discordant pairs matter.
inline double fair_odds_ratio(const MatchedPairTable& t) {
    return detail::nz(t.n12) / detail::nz(t.n21);
}

/// Matched-pair interval: exp(ln w' -+ z' * sqrt(1/n12 + 1/n21)).
inline Interval matched_ci(const MatchedPairTable& t, Confidence conf) {
    const double n12 = detail::nz(t.n12), n21 = detail::nz(t.n21);
    const double w = n12 / n21;
    const double s = std::sqrt(1.0 / n12 + 1.0 / n21);
    const double z = critical_value(conf);
    return {std::exp(std::log(w) - z * s), std::exp(std::log(w) + z * s)};
}

}  // namespace causalmine
