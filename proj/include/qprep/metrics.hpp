#pragma once
// PSNR and rate-distortion aggregation into a CSV table.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qprep/encoders.hpp"
#include "qprep/errors.hpp"
#include "qprep/image.hpp"

namespace qprep {

// 10*log10(255^2 / MSE); +infinity when the images are identical.
inline double psnr(const Image& original, const Image& reconstructed) {
    if (original.width() != reconstructed.width() ||
        original.height() != reconstructed.height() ||
        original.channels() != reconstructed.channels())
        throw ArgumentError("psnr expects images of equal dimensions and channel count");
    long double se = 0.0L;
    const auto& a = original.samples();
    const auto& b = reconstructed.samples();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
        se += d * d;
    }
    if (se == 0.0L) return std::numeric_limits<double>::infinity();
    const long double mse = se / static_cast<long double>(a.size());
    return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / mse));
}

struct RatePoint {
    std::string image;
    std::string channel;
    Scheme scheme = Scheme::Scmfrqi;
    std::int32_t q_factor = 0;   // 0 in direct mode
    double psnr_db = 0.0;
    std::size_t value_bits = 0;  // magnitude-code width used for the run
    CostReport cost;
};

inline double bits_to_mb(std::uint64_t bits) {
    return static_cast<double>(bits) / (8.0 * 1024.0 * 1024.0);
}

namespace detail {

inline int channel_rank(const std::string& label) {
    if (label == "gray") return 0;
    if (label == "R") return 1;
    if (label == "G") return 2;
    if (label == "B") return 3;
    return 4;
}

inline bool rate_point_order(const RatePoint& a, const RatePoint& b) {
    if (a.image != b.image) return a.image < b.image;
    const int ra = channel_rank(a.channel);
    const int rb = channel_rank(b.channel);
    if (ra != rb) return ra < rb;
    if (a.channel != b.channel) return a.channel < b.channel;
    if (a.q_factor != b.q_factor) return a.q_factor < b.q_factor;
    return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);  // SCMFRQI first
}

}  // namespace detail

// Deterministic (image, channel, q_factor, scheme) ordering for reporting.
inline std::vector<RatePoint> rate_table(std::vector<RatePoint> points) {
    std::stable_sort(points.begin(), points.end(), detail::rate_point_order);
    return points;
}

inline constexpr std::string_view kCsvHeader =
    "image,channel,scheme,q_factor,psnr_db,bits,q_ones,s_bit,t_bit,a_bit,b_e,mb";

inline std::string to_csv(const std::vector<RatePoint>& points) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const RatePoint& p : rate_table(points)) {
        os << p.image << ',' << p.channel << ',' << scheme_name(p.scheme) << ',' << p.q_factor
           << ',';
        if (std::isinf(p.psnr_db))
            os << "inf";
        else
            os << std::fixed << std::setprecision(4) << p.psnr_db;
        os << ',' << p.cost.br << ',' << p.cost.q_ones << ',' << p.cost.s_bit << ','
           << p.cost.t_bit << ',' << p.cost.a_bit << ',' << p.cost.b_e << ',' << std::fixed
           << std::setprecision(2) << bits_to_mb(p.cost.br) << '\n';
    }
    return os.str();
}

}  // namespace qprep
