// Global histogram thresholds.
//
// Every method works on the same convention: a level t splits the histogram
// into background [0, t] and foreground (t, 255]. Criterion-based methods
// only consider levels where both classes are non-empty, i.e. t in
// [first occupied, last occupied - 1], and take the lowest t among equal
// optima. A histogram with a single occupied bin has no such level, so those
// methods fail on it.

#include "grayfuzz/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grayfuzz {

namespace {

using i128 = __int128;

/// Cumulative statistics with exact integer sums.
struct CumulativeStats {
    std::array<std::uint64_t, 256> count{};   // sum of h[i] for i <= t
    std::array<std::uint64_t, 256> sum{};     // sum of i*h[i]
    std::array<std::uint64_t, 256> sum_sq{};  // sum of i*i*h[i]
    std::uint64_t n = 0;
    std::uint64_t s = 0;
    std::uint64_t q = 0;
    int first = 0;
    int last = 0;

    explicit CumulativeStats(const Histogram& h) {
        std::uint64_t c = 0, s1 = 0, s2 = 0;
        for (int i = 0; i < 256; ++i) {
            const std::uint64_t v = h.counts[i];
            c += v;
            s1 += v * static_cast<std::uint64_t>(i);
            s2 += v * static_cast<std::uint64_t>(i * i);
            count[i] = c;
            sum[i] = s1;
            sum_sq[i] = s2;
        }
        n = c;
        s = s1;
        q = s2;
        first = h.first_occupied();
        last = h.last_occupied();
    }

    bool splittable() const { return first < last; }
};

/// Tracks the lowest argmax of a criterion.
template <typename T>
class BestLevel {
public:
    void offer(int t, T value) {
        if (!level_ || value > best_) {
            level_ = t;
            best_ = value;
        }
    }
    std::optional<int> level() const { return level_; }

private:
    std::optional<int> level_;
    T best_{};
};

ThresholdResult failed() { return {}; }
ThresholdResult at(int t) { return ThresholdResult{t}; }

// Otsu: maximise the between-class variance
//   w0 w1 (mu0 - mu1)^2  ∝  (n0 S - N s0)^2 / (n0 n1).
ThresholdResult otsu(const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    BestLevel<long double> best;
    for (int t = c.first; t < c.last; ++t) {
        const std::uint64_t n0 = c.count[t];
        const std::uint64_t n1 = c.n - n0;
        const i128 diff = static_cast<i128>(n0) * c.s - static_cast<i128>(c.n) * c.sum[t];
        const long double d = static_cast<long double>(diff);
        best.offer(t, d * d / (static_cast<long double>(n0) * static_cast<long double>(n1)));
    }
    return {best.level()};
}

// Ridler-Calvard iterative intermeans, started from the floor of the mean:
//   t <- floor((mu0(t) + mu1(t)) / 2)
// The update is monotone in t, so the iteration walks to a fixed point.
ThresholdResult isodata(const CumulativeStats& c, int max_iterations) {
    if (!c.splittable()) return failed();
    int t = static_cast<int>(c.s / c.n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        const i128 n0 = c.count[t];
        const i128 n1 = static_cast<i128>(c.n) - n0;
        const i128 s0 = c.sum[t];
        const i128 s1 = static_cast<i128>(c.s) - s0;
        const i128 next = (s0 * n1 + s1 * n0) / (2 * n0 * n1);
        if (next == t) return at(t);
        t = static_cast<int>(next);
    }
    return failed();
}

// Legacy IsoData variant ("Default"): scan the split upward from the first
// occupied bin until the split passes the average of the two class means,
// then round that average.
ThresholdResult default_isodata(const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    int moving = c.first;
    i128 num = 0;
    i128 den = 1;
    do {
        const i128 n0 = c.count[moving];
        const i128 n1 = static_cast<i128>(c.n) - n0;
        const i128 s0 = c.sum[moving];
        const i128 s1 = static_cast<i128>(c.s) - s0;
        // result = num / den = (s0/n0 + s1/n1) / 2
        num = s0 * n1 + s1 * n0;
        den = 2 * n0 * n1;
        ++moving;
    } while (static_cast<i128>(moving + 1) * den <= num && moving < c.last - 1);
    // round half up
    const i128 level = (2 * num + den) / (2 * den);
    return at(std::clamp(static_cast<int>(level), c.first, c.last));
}

ThresholdResult mean_level(const CumulativeStats& c) {
    return at(static_cast<int>(c.s / c.n));
}

// Doyle percentile: the level whose cumulative fraction is closest to p.
ThresholdResult percentile(const CumulativeStats& c, double p) {
    const double n = static_cast<double>(c.n);
    BestLevel<double> best;
    for (int t = c.first; t <= c.last; ++t) {
        best.offer(t, -std::abs(static_cast<double>(c.count[t]) / n - p));
    }
    return {best.level()};
}

// Kapur-Sahoo-Wong maximum entropy: maximise H0(t) + H1(t), with
//   Hk = ln Pk - (sum_{i in k} p_i ln p_i) / Pk.
ThresholdResult max_entropy(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double n = static_cast<double>(c.n);
    std::array<double, 256> plogp{};
    double total = 0.0;
    double run = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        if (p > 0.0) run += p * std::log(p);
        plogp[i] = run;
    }
    total = run;
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const double p0 = static_cast<double>(c.count[t]) / n;
        const double p1 = static_cast<double>(c.n - c.count[t]) / n;
        const double a0 = plogp[t];
        const double a1 = total - a0;
        best.offer(t, std::log(p0) - a0 / p0 + std::log(p1) - a1 / p1);
    }
    return {best.level()};
}

// Renyi entropy of order alpha != 1 summed over both classes:
//   H = 1/(1-alpha) [ln sum p_i^alpha - alpha ln P] per class.
std::optional<int> renyi_level(const Histogram& h, const CumulativeStats& c, double alpha) {
    const double n = static_cast<double>(c.n);
    std::array<double, 256> powsum{};
    double run = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        if (p > 0.0) run += std::pow(p, alpha);
        powsum[i] = run;
    }
    const double total = run;
    const double k = 1.0 / (1.0 - alpha);
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const double p0 = static_cast<double>(c.count[t]) / n;
        const double p1 = static_cast<double>(c.n - c.count[t]) / n;
        const double r0 = powsum[t];
        const double r1 = total - r0;
        best.offer(t, k * (std::log(r0) - alpha * std::log(p0)) + k * (std::log(r1) - alpha * std::log(p1)));
    }
    return best.level();
}

// Sahoo-Wilkins-Yeager: combine the Renyi optima for alpha = 0.5, 1, 2.
ThresholdResult renyi_entropy(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const auto a = renyi_level(h, c, 0.5);
    const auto b = max_entropy(h, c).level;
    const auto d = renyi_level(h, c, 2.0);
    if (!a || !b || !d) return failed();

    std::array<int, 3> ts = {*a, *b, *d};
    std::sort(ts.begin(), ts.end());
    int beta1 = 1, beta2 = 2, beta3 = 1;
    if (std::abs(ts[0] - ts[1]) <= 5) {
        if (std::abs(ts[1] - ts[2]) > 5) {
            beta1 = 0; beta2 = 1; beta3 = 3;
        }
    } else if (std::abs(ts[1] - ts[2]) <= 5) {
        beta1 = 3; beta2 = 1; beta3 = 0;
    }
    const double n = static_cast<double>(c.n);
    const double p_lo = static_cast<double>(c.count[ts[0]]) / n;
    const double p_hi = static_cast<double>(c.count[ts[2]]) / n;
    const double omega = p_hi - p_lo;
    const double opt = ts[0] * (p_lo + 0.25 * omega * beta1) + 0.25 * ts[1] * omega * beta2 +
                       ts[2] * (1.0 - p_hi + 0.25 * omega * beta3);
    // opt is a convex combination of the three levels; the epsilon absorbs
    // rounding when they coincide.
    return at(std::clamp(static_cast<int>(std::floor(opt + 1e-9)), ts[0], ts[2]));
}

// Yen: maximise  -ln(G0 G1) + 2 ln(P0 P1), Gk = sum_{i in k} p_i^2.
ThresholdResult yen(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double n = static_cast<double>(c.n);
    std::array<double, 256> sq{};
    double run = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        run += p * p;
        sq[i] = run;
    }
    const double total = run;
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const double p0 = static_cast<double>(c.count[t]) / n;
        const double p1 = static_cast<double>(c.n - c.count[t]) / n;
        const double g0 = sq[t];
        const double g1 = total - g0;
        best.offer(t, -std::log(g0 * g1) + 2.0 * std::log(p0 * p1));
    }
    return {best.level()};
}

// Tsai moment preservation: the cumulative fraction that preserves the
// first three moments of a two-level image, applied as a p-tile.
ThresholdResult moments(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double n = static_cast<double>(c.n);
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        m1 += i * p;
        m2 += static_cast<double>(i) * i * p;
        m3 += static_cast<double>(i) * i * i * p;
    }
    const double cd = m2 - m1 * m1;
    if (!(cd > 0.0)) return failed();
    const double c0 = (-m2 * m2 + m1 * m3) / cd;
    const double c1 = (m1 * m2 - m3) / cd;
    const double disc = c1 * c1 - 4.0 * c0;
    if (!(disc >= 0.0)) return failed();
    const double z0 = 0.5 * (-c1 - std::sqrt(disc));
    const double z1 = 0.5 * (-c1 + std::sqrt(disc));
    const double p0 = (z1 - m1) / (z1 - z0);

    // First level whose cumulative count reaches p0 * n. The slack absorbs
    // rounding when p0 * n is an exact count, as for two-level histograms.
    const double target = p0 * n - 1e-6;
    for (int t = c.first; t <= c.last; ++t) {
        if (static_cast<double>(c.count[t]) >= target) return at(std::clamp(t, c.first, c.last - 1));
    }
    return failed();
}

double shannon(double mu) {
    return -mu * std::log(mu) - (1.0 - mu) * std::log(1.0 - mu);
}

// Huang-Wang fuzzy thresholding: minimise the Shannon fuzziness of the
// membership 1 / (1 + |i - mu_k| / (last - first)) to the own class mean.
ThresholdResult huang(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double term = 1.0 / static_cast<double>(c.last - c.first);
    std::vector<int> occupied;
    for (int i = c.first; i <= c.last; ++i) {
        if (h.counts[i] != 0) occupied.push_back(i);
    }
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const double mu0 = static_cast<double>(c.sum[t]) / static_cast<double>(c.count[t]);
        const double mu1 = static_cast<double>(c.s - c.sum[t]) / static_cast<double>(c.n - c.count[t]);
        double ent = 0.0;
        for (int i : occupied) {
            const double mean = i <= t ? mu0 : mu1;
            const double mu = 1.0 / (1.0 + term * std::abs(i - mean));
            if (mu < 1e-6 || mu > 0.999999) continue;
            ent += static_cast<double>(h.counts[i]) * shannon(mu);
        }
        best.offer(t, -ent);
    }
    return {best.level()};
}

// Li-Tam minimum cross entropy, minimised globally:
//   eta(t) = -s0 ln(s0/n0) - s1 ln(s1/n1)   (constant term dropped)
ThresholdResult li(const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    auto term = [](std::uint64_t s, std::uint64_t n) {
        if (s == 0) return 0.0;
        const double sd = static_cast<double>(s);
        return -sd * std::log(sd / static_cast<double>(n));
    };
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const auto n0 = c.count[t];
        const auto s0 = c.sum[t];
        best.offer(t, -(term(s0, n0) + term(c.s - s0, c.n - n0)));
    }
    return {best.level()};
}

// Kittler-Illingworth minimum error, minimised globally:
//   J(t) = P0 ln var0 + P1 ln var1 - 2 (P0 ln P0 + P1 ln P1)
// Levels leaving a zero-variance class are not admissible.
ThresholdResult min_error(const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double n = static_cast<double>(c.n);
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const i128 n0 = c.count[t];
        const i128 n1 = static_cast<i128>(c.n) - n0;
        const i128 s0 = c.sum[t];
        const i128 s1 = static_cast<i128>(c.s) - s0;
        const i128 q0 = c.sum_sq[t];
        const i128 q1 = static_cast<i128>(c.q) - q0;
        const i128 v0 = n0 * q0 - s0 * s0;  // n0^2 var0
        const i128 v1 = n1 * q1 - s1 * s1;
        if (v0 == 0 || v1 == 0) continue;
        const double nd0 = static_cast<double>(n0);
        const double nd1 = static_cast<double>(n1);
        const double var0 = static_cast<double>(v0) / (nd0 * nd0);
        const double var1 = static_cast<double>(v1) / (nd1 * nd1);
        const double p0 = nd0 / n;
        const double p1 = nd1 / n;
        best.offer(t, -(p0 * std::log(var0) + p1 * std::log(var1) - 2.0 * (p0 * std::log(p0) + p1 * std::log(p1))));
    }
    return {best.level()};
}

// Prewitt-Mendelsohn minimum: smooth with a 3-tap mean (zero padded) until
// exactly two strict interior maxima remain; the threshold is the lowest
// minimum of the smoothed histogram between them.
ThresholdResult minimum(const Histogram& h, const CumulativeStats& c, int max_iterations) {
    if (!c.splittable()) return failed();
    std::array<double, 256> y{};
    for (int i = 0; i < 256; ++i) y[i] = static_cast<double>(h.counts[i]);

    auto peaks = [](const std::array<double, 256>& v) {
        std::vector<int> found;
        for (int k = 1; k < 255; ++k) {
            if (v[k - 1] < v[k] && v[k + 1] < v[k]) found.push_back(k);
        }
        return found;
    };

    auto found = peaks(y);
    int iterations = 0;
    while (found.size() != 2) {
        if (iterations++ >= max_iterations) return failed();
        std::array<double, 256> next{};
        next[0] = (y[0] + y[1]) / 3.0;
        for (int i = 1; i < 255; ++i) next[i] = (y[i - 1] + y[i] + y[i + 1]) / 3.0;
        next[255] = (y[254] + y[255]) / 3.0;
        y = next;
        found = peaks(y);
    }

    int level = found[0];
    for (int t = found[0] + 1; t <= found[1]; ++t) {
        if (y[t] < y[level]) level = t;
    }
    return at(std::clamp(level, c.first, c.last - 1));
}

// Shanbhag: minimise |E0(t) - E1(t)| of the class information measures.
ThresholdResult shanbhag(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    const double n = static_cast<double>(c.n);
    std::array<double, 256> p{};
    std::array<double, 256> cum{};
    for (int i = 0; i < 256; ++i) {
        p[i] = static_cast<double>(h.counts[i]) / n;
        cum[i] = static_cast<double>(c.count[i]) / n;
    }
    BestLevel<double> best;
    for (int t = c.first; t < c.last; ++t) {
        const double p0 = cum[t];
        const double p1 = static_cast<double>(c.n - c.count[t]) / n;

        double back = 0.0;
        double term = 0.5 / p0;
        for (int i = 1; i <= t; ++i) {
            back -= p[i] * std::log(1.0 - term * cum[i - 1]);
        }
        back *= term;

        double obj = 0.0;
        term = 0.5 / p1;
        for (int i = t + 1; i < 256; ++i) {
            const double tail = static_cast<double>(c.n - c.count[i]) / n;
            obj -= p[i] * std::log(1.0 - term * tail);
        }
        obj *= term;

        best.offer(t, -std::abs(back - obj));
    }
    return {best.level()};
}

// Zack triangle: draw a line from the histogram peak to the zero bin just
// beyond the far end of the longer tail; the threshold is the bin lying
// farthest below that line. Distances are compared through the exact
// integer cross product, which is proportional to the perpendicular distance.
ThresholdResult triangle(const Histogram& h, const CumulativeStats& c) {
    if (!c.splittable()) return failed();
    int peak = 0;
    for (int i = 1; i < 256; ++i) {
        if (h.counts[i] > h.counts[peak]) peak = i;
    }
    const int left_end = c.first > 0 ? c.first - 1 : 0;
    const int right_end = c.last < 255 ? c.last + 1 : 255;

    int ax = 0, bx = 0, lo = 0, hi = 0;
    if (peak - left_end >= right_end - peak) {
        ax = left_end; bx = peak; lo = left_end + 1; hi = peak - 1;
    } else {
        ax = peak; bx = right_end; lo = peak + 1; hi = right_end - 1;
    }
    if (lo > hi) return failed();

    const i128 ay = h.counts[ax];
    const i128 by = h.counts[bx];
    BestLevel<i128> best;
    for (int t = lo; t <= hi; ++t) {
        const i128 cross = static_cast<i128>(bx - ax) * (static_cast<i128>(h.counts[t]) - ay) -
                           (by - ay) * static_cast<i128>(t - ax);
        best.offer(t, -cross);
    }
    return at(std::clamp(*best.level(), c.first, c.last - 1));
}

} // namespace

ThresholdResult compute_threshold(ThresholdMethod method, const Histogram& hist,
                                  const ThresholdOptions& options) {
    if (hist.total == 0) {
        throw std::invalid_argument("compute_threshold: empty histogram");
    }
    const CumulativeStats c(hist);
    switch (method) {
    case ThresholdMethod::Default: return default_isodata(c);
    case ThresholdMethod::Huang: return huang(hist, c);
    case ThresholdMethod::IsoData: return isodata(c, options.max_iterations);
    case ThresholdMethod::Li: return li(c);
    case ThresholdMethod::MaxEntropy: return max_entropy(hist, c);
    case ThresholdMethod::Mean: return mean_level(c);
    case ThresholdMethod::MinError: return min_error(c);
    case ThresholdMethod::Minimum: return minimum(hist, c, options.max_iterations);
    case ThresholdMethod::Moments: return moments(hist, c);
    case ThresholdMethod::Otsu: return otsu(c);
    case ThresholdMethod::Percentile: return percentile(c, options.percentile);
    case ThresholdMethod::RenyiEntropy: return renyi_entropy(hist, c);
    case ThresholdMethod::Shanbhag: return shanbhag(hist, c);
    case ThresholdMethod::Triangle: return triangle(hist, c);
    case ThresholdMethod::Yen: return yen(hist, c);
    }
    throw std::invalid_argument("compute_threshold: unknown method");
}

} // namespace grayfuzz
