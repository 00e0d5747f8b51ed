#include "nnpsi/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nnpsi/independence.hpp"
#include "nnpsi/rng.hpp"

namespace nnpsi {

SimSetting::Kind parse_setting(const std::string& name) {
    if (name == "sin") return SimSetting::Kind::Sin;
    if (name == "max") return SimSetting::Kind::Max;
    if (name == "mixture") return SimSetting::Kind::Mixture;
    if (name == "degree") return SimSetting::Kind::Degree;
    throw std::invalid_argument("unknown setting '" + name + "'");
}

std::string setting_name(SimSetting::Kind kind) {
    switch (kind) {
        case SimSetting::Kind::Sin: return "sin";
        case SimSetting::Kind::Max: return "max";
        case SimSetting::Kind::Mixture: return "mixture";
        case SimSetting::Kind::Degree: return "degree";
    }
    return "?";
}

namespace {

void brownian_path(Rng& rng, int m, double* out) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(m));
    double acc = 0.0;
    for (int g = 0; g < m; ++g) {
        acc += sd * rng.normal();
        out[g] = acc;
    }
}

} // namespace

SimSample generate(const SimSetting& setting) {
    const int n = setting.n;
    const int m = setting.grid;
    if (n < 1) throw std::invalid_argument("generate: n must be positive");
    if (m < 2) throw std::invalid_argument("generate: grid must have at least 2 points");
    Rng rng = Rng::stream(setting.seed, 0x5e77u);

    switch (setting.kind) {
        case SimSetting::Kind::Sin: {
            std::vector<double> coords(static_cast<std::size_t>(n) * 2);
            std::vector<int> labels(n);
            for (int i = 0; i < n; ++i) {
                const double x1 = rng.uniform01();
                const double x2 = rng.uniform01();
                coords[2 * static_cast<std::size_t>(i)] = x1;
                coords[2 * static_cast<std::size_t>(i) + 1] = x2;
                labels[i] = std::sin(2.0 * M_PI * (x1 + x2)) >= 0.0 ? 1 : 0;
            }
            return SimSample{PointCloud::euclidean(n, 2, std::move(coords)),
                             LabelVector::from_ints(labels)};
        }
        case SimSetting::Kind::Max: {
            std::vector<double> vals(static_cast<std::size_t>(n) * m);
            std::vector<int> labels(n);
            for (int i = 0; i < n; ++i) {
                double* path = vals.data() + static_cast<std::size_t>(i) * m;
                brownian_path(rng, m, path);
                const double mx = *std::max_element(path, path + m);
                labels[i] = mx >= 1.0 ? 1 : 0;
            }
            return SimSample{PointCloud::function_grid(n, m, std::move(vals)),
                             LabelVector::from_ints(labels)};
        }
        case SimSetting::Kind::Mixture: {
            std::vector<double> vals(static_cast<std::size_t>(n) * m);
            std::vector<int> labels(n);
            const double dt = 1.0 / (m - 1);
            for (int i = 0; i < n; ++i) {
                double* path = vals.data() + static_cast<std::size_t>(i) * m;
                const bool second = rng.uniform01() < 0.5;
                labels[i] = second ? 1 : 0;
                if (second) {
                    // damped random sine series
                    double z[20];
                    for (int k = 0; k < 20; ++k) {
                        z[k] = std::sqrt(std::pow(0.5, k + 1)) * rng.normal();
                    }
                    for (int g = 0; g < m; ++g) {
                        const double t = g * dt;
                        double s = 0.0;
                        for (int k = 0; k < 20; ++k) {
                            s += z[k] * std::sin(M_PI * (k + 1) * t);
                        }
                        path[g] = s;
                    }
                } else {
                    brownian_path(rng, m, path);
                }
            }
            return SimSample{PointCloud::function_grid(n, m, std::move(vals)),
                             LabelVector::from_ints(labels)};
        }
        case SimSetting::Kind::Degree: {
            std::vector<double> vals(static_cast<std::size_t>(n) * m);
            std::vector<int> labels(n);
            const double dt = 1.0 / (m - 1);
            for (int i = 0; i < n; ++i) {
                const int deg = rng.uniform_int(9);
                labels[i] = deg;
                double coeff[9];
                for (int j = 0; j <= deg; ++j) coeff[j] = rng.uniform01();
                double* path = vals.data() + static_cast<std::size_t>(i) * m;
                for (int g = 0; g < m; ++g) {
                    const double t = g * dt;
                    // Horner evaluation
                    double v = coeff[deg];
                    for (int j = deg - 1; j >= 0; --j) v = v * t + coeff[j];
                    path[g] = v;
                }
            }
            return SimSample{PointCloud::function_grid(n, m, std::move(vals)),
                             LabelVector::from_ints(labels)};
        }
    }
    throw std::invalid_argument("generate: invalid kind");
}

LabelVector mix_labels(const LabelVector& y, double lambda, std::uint64_t seed) {
    if (lambda < 0.0 || lambda > 1.0) {
        throw std::invalid_argument("mix_labels: lambda must lie in [0,1]");
    }
    const int n = static_cast<int>(y.codes.size());
    Rng rng = Rng::stream(seed, 0x3137u);
    std::vector<int> mixed(n);
    for (int i = 0; i < n; ++i) {
        if (rng.uniform01() < lambda) {
            mixed[i] = y.codes[i];
        } else {
            mixed[i] = y.codes[rng.uniform_int(n)];
        }
    }
    LabelVector out;
    out.codes = std::move(mixed);
    out.K = y.K;
    out.level_names = y.level_names;
    return out;
}

PowerCurve power_curve(const SimSetting& base, const std::vector<double>& lambdas, int reps,
                       double alpha, std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("power_curve: reps must be >= 1");
    if (lambdas.empty()) throw std::invalid_argument("power_curve: empty lambda grid");
    PowerCurve pc;
    pc.lambdas = lambdas;
    pc.reps = reps;
    pc.alpha = alpha;
    pc.n = base.n;
    pc.setting = setting_name(base.kind);

    const int L = static_cast<int>(lambdas.size());
    std::vector<int> rejects(L, 0);
    std::vector<int> degen(L, 0);

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        // every stream below is a pure function of (seed, r)
        SimSetting s = base;
        Rng derive = Rng::stream(seed, static_cast<std::uint64_t>(r));
        s.seed = derive.next_u64();
        const SimSample sample = generate(s);
        const NeighborGraph g = build_neighbor_graph(sample.x);
        for (int li = 0; li < L; ++li) {
            Rng mix_derive = Rng::stream(seed, static_cast<std::uint64_t>(r),
                                         static_cast<std::uint64_t>(li) + 1);
            const LabelVector ym = mix_labels(sample.y, lambdas[li], mix_derive.next_u64());
            bool rejected = false;
            try {
                const TestReport rep = independence_statistic(contingency(ym, g), g);
                rejected = rep.p_value < alpha;
            } catch (const std::exception&) {
#pragma omp atomic
                ++degen[li];
            }
            if (rejected) {
#pragma omp atomic
                ++rejects[li];
            }
        }
    }
    pc.rejections.resize(L);
    for (int li = 0; li < L; ++li) {
        pc.rejections[li] = static_cast<double>(rejects[li]) / reps;
        pc.degenerate += degen[li];
    }
    return pc;
}

std::string power_curve_csv(const PowerCurve& pc) {
    std::ostringstream os;
    os << "lambda,rejections,reps,alpha,n,setting\n";
    for (std::size_t i = 0; i < pc.lambdas.size(); ++i) {
        os << pc.lambdas[i] << ',' << pc.rejections[i] << ',' << pc.reps << ',' << pc.alpha << ','
           << pc.n << ',' << pc.setting << '\n';
    }
    return os.str();
}

double ks_distance_chi2(std::vector<double> sample, int df) {
    if (sample.empty()) throw std::invalid_argument("ks_distance_chi2: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = 1.0 - chi2_sf(sample[i], df);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(f - i / n));
    }
    return d;
}

CalibrationReport null_calibration(int n, int K, int reps, double alpha, std::uint64_t seed) {
    if (n < 2 || K < 2 || reps < 1) {
        throw std::invalid_argument("null_calibration: need n >= 2, K >= 2, reps >= 1");
    }
    CalibrationReport rep;
    rep.n = n;
    rep.K = K;
    rep.reps = reps;
    rep.alpha = alpha;
    rep.df = (K - 1) * (K - 1);

    std::vector<double> stats(reps, -1.0);
    std::vector<char> degenerate(reps, 0);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r), 0xca11u);
        std::vector<double> coords(static_cast<std::size_t>(n) * 2);
        for (double& c : coords) c = rng.uniform01();
        std::vector<int> labels(n);
        for (int& l : labels) l = rng.uniform_int(K);
        const PointCloud x = PointCloud::euclidean(n, 2, std::move(coords));
        const LabelVector y = LabelVector::from_ints(labels);
        try {
            const NeighborGraph g = build_neighbor_graph(x);
            const TestReport t = independence_statistic(contingency(y, g), g);
            if (t.df == rep.df) {
                stats[r] = t.statistic;
            } else {
                degenerate[r] = 1;  // a level went unobserved
            }
        } catch (const std::exception&) {
            degenerate[r] = 1;
        }
    }
    std::vector<double> clean;
    clean.reserve(reps);
    int rejected = 0;
    for (int r = 0; r < reps; ++r) {
        if (degenerate[r]) {
            ++rep.degenerate;
            continue;
        }
        clean.push_back(stats[r]);
        if (chi2_sf(stats[r], rep.df) < alpha) ++rejected;
    }
    if (clean.empty()) throw std::domain_error("null_calibration: all replications degenerate");
    rep.rejection_rate = static_cast<double>(rejected) / reps;
    rep.ks_distance = ks_distance_chi2(std::move(clean), rep.df);
    return rep;
}

} // namespace nnpsi
