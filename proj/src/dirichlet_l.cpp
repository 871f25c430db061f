#include "msym/dirichlet_l.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "msym/parallel.hpp"

namespace msym {

namespace {

cplx l_direct(const DirichletCharacter& chi, cplx s) {
    const long q = chi.modulus();
    CompensatedSum<cplx> acc;
    for (long a = 1; a < q; ++a) {
        cplx c = chi(a);
        double x = static_cast<double>(a) / q;
        // the 1/(s-1) parts cancel for nontrivial chi
        acc.add(c * (chi.is_trivial() ? hurwitz_zeta(s, x).value : hurwitz_zeta_minus_pole(s, x).value));
    }
    return std::exp(-s * std::log(static_cast<double>(q))) * acc.value();
}

// Gamma((1-s)/2) / Gamma(s/2), zero at s = 0, -2, -4, ...
cplx gamma_ratio_fe(cplx s) {
    if (is_nonpositive_integer(s / 2.0)) return 0.0;
    return std::exp(lgamma_complex((1.0 - s) / 2.0) - lgamma_complex(s / 2.0));
}

}  // namespace

cplx l_value(const DirichletCharacter& chi, cplx s) {
    if (chi.is_trivial() && s == cplx(1.0, 0.0)) throw PoleError("L(s, trivial) pole at s = 1", 1);
    if (std::real(s) < 0.0 && !chi.is_trivial() && chi.is_even()) {
        const double q = static_cast<double>(chi.modulus());
        cplx eps = root_number(chi);
        return eps * std::exp((0.5 - s) * std::log(q / kPi)) * gamma_ratio_fe(s) *
               l_direct(chi.conj(), 1.0 - s);
    }
    return l_direct(chi, s);
}

cplx l_derivative(const DirichletCharacter& chi, cplx s) {
    if (chi.is_trivial() && std::abs(s - 1.0) <= 0.06)
        throw std::invalid_argument("l_derivative: Cauchy circle meets the pole at s = 1");
    return cauchy_derivative([&](cplx u) { return l_value(chi, u); }, s);
}

cplx root_number(const DirichletCharacter& chi) {
    if (chi.is_trivial()) throw std::invalid_argument("root_number: trivial character");
    if (!chi.is_even()) throw std::invalid_argument("root_number: odd characters are not supported");
    return gauss_sum(chi) / std::sqrt(static_cast<double>(chi.modulus()));
}

cplx completed_l(const DirichletCharacter& chi, cplx s) {
    const double q = static_cast<double>(chi.modulus());
    return std::exp(s / 2.0 * std::log(q / kPi) + lgamma_complex(s / 2.0)) * l_value(chi, s);
}

double hardy_z(const DirichletCharacter& chi, double t) {
    const double q = static_cast<double>(chi.modulus());
    cplx eps = root_number(chi);
    double phase = 0.5 * t * std::log(q / kPi) + std::imag(lgamma_complex(cplx(0.25, 0.5 * t))) -
                   0.5 * std::arg(eps);
    return std::real(std::polar(1.0, phase) * l_value(chi, cplx(0.5, t)));
}

long argument_principle_count(const DirichletCharacter& chi, double sig0, double sig1, double t0,
                              double t1) {
    auto f = [&](cplx s) { return l_value(chi, s); };
    const cplx corners[5] = {{sig0, t0}, {sig1, t0}, {sig1, t1}, {sig0, t1}, {sig0, t0}};
    std::vector<std::pair<cplx, cplx>> segs;
    for (int e = 0; e < 4; ++e) {
        cplx a = corners[e], b = corners[e + 1];
        long n = std::max<long>(4, static_cast<long>(std::ceil(std::abs(b - a) / 0.05)));
        for (long j = 0; j < n; ++j) segs.emplace_back(a + (b - a) * (double(j) / n), a + (b - a) * (double(j + 1) / n));
    }
    std::vector<double> darg(segs.size());
    parallel_for(static_cast<long>(segs.size()), 0, [&](long i) {
        // adaptive: split until each step turns the argument by less than 0.4 rad
        struct Item { cplx a, b; cplx fa, fb; int depth; };
        std::vector<Item> stack{{segs[i].first, segs[i].second, f(segs[i].first), f(segs[i].second), 0}};
        double acc = 0.0;
        while (!stack.empty()) {
            Item it = stack.back();
            stack.pop_back();
            double d = std::arg(it.fb / it.fa);
            if (std::abs(d) > 0.4 && it.depth < 40) {
                cplx m = 0.5 * (it.a + it.b);
                cplx fm = f(m);
                stack.push_back({m, it.b, fm, it.fb, it.depth + 1});
                stack.push_back({it.a, m, it.fa, fm, it.depth + 1});
            } else {
                acc += d;
            }
        }
        darg[i] = acc;
    });
    double total = 0.0;
    for (double d : darg) total += d;
    return std::lround(total / (2.0 * kPi));
}

namespace {

double refine_zero(const DirichletCharacter& chi, double a, double b, double za, double zb) {
    // Illinois-modified regula falsi on the sign change.
    int side = 0;
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        double c = (a * zb - b * za) / (zb - za);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        double zc = hardy_z(chi, c);
        if (zc == 0.0) return c;
        if ((zc > 0) == (za > 0)) {
            a = c;
            za = zc;
            if (side == -1) zb *= 0.5;
            side = -1;
        } else {
            b = c;
            zb = zc;
            if (side == 1) za *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> scan_ordinates(const DirichletCharacter& chi, double lo, double hi, double step,
                                   int jobs) {
    long n = static_cast<long>(std::ceil((hi - lo) / step));
    std::vector<double> ts(n + 1), zs(n + 1);
    for (long i = 0; i <= n; ++i) ts[i] = lo + (hi - lo) * double(i) / n;
    parallel_for(n + 1, jobs, [&](long i) { zs[i] = hardy_z(chi, ts[i]); });
    std::vector<long> brackets;
    for (long i = 0; i < n; ++i)
        if ((zs[i] > 0) != (zs[i + 1] > 0)) brackets.push_back(i);
    std::vector<double> out(brackets.size());
    parallel_for(static_cast<long>(brackets.size()), jobs, [&](long j) {
        long i = brackets[j];
        out[j] = refine_zero(chi, ts[i], ts[i + 1], zs[i], zs[i + 1]);
    });
    return out;
}

double pick_edge(const std::vector<double>& ords, double from, double to) {
    double best = from, bestd = -1.0;
    for (int k = 0; k <= 50; ++k) {
        double t = from + (to - from) * k / 50.0;
        double d = 1e9;
        for (double o : ords) d = std::min(d, std::abs(o - t));
        if (d > bestd) {
            bestd = d;
            best = t;
        }
    }
    return best;
}

}  // namespace

ZeroCache find_zeros(const DirichletCharacter& chi, double T, const ZeroSearchOptions& opt) {
    if (!(T >= 0.0) || T > 120.0) throw std::invalid_argument("find_zeros: T must lie in [0, 120]");
    root_number(chi);  // rejects trivial / odd
    ZeroCache zc{chi, T, {}, {}, 0, T};
    for (int k = 0; k <= 10; ++k) {
        cplx r(-2.0 * k, 0.0);
        zc.trivial.push_back({r, l_derivative(chi, r), k, ZeroKind::trivial});
    }
    if (T == 0.0) return zc;
    const double margin = 1.0;
    double step = opt.step;
    for (int attempt = 0; attempt <= opt.max_refinements; ++attempt, step *= 0.5) {
        std::vector<double> ords = scan_ordinates(chi, -T - margin, T + margin, step, opt.jobs);
        double hi = pick_edge(ords, T + 0.05, T + 0.6);
        double lo = pick_edge(ords, -T - 0.6, -T - 0.05);
        long located = std::count_if(ords.begin(), ords.end(), [&](double o) { return o > lo && o < hi; });
        // the rectangle contains the trivial zero at 0
        long counted = argument_principle_count(chi, -0.5, 1.5, lo, hi) - 1;
        if (counted != located) {
            if (attempt < opt.max_refinements) continue;
            // localize on unit-height strips
            for (double a = lo; a < hi; a += 5.0) {
                double b = std::min(hi, a + 5.0);
                double aa = pick_edge(ords, a - 0.3, a + 0.3), bb = b >= hi ? hi : pick_edge(ords, b - 0.3, b + 0.3);
                long loc = std::count_if(ords.begin(), ords.end(), [&](double o) { return o > aa && o < bb; });
                long cnt = argument_principle_count(chi, -0.5, 1.5, aa, bb) - (aa < 0 && bb > 0 ? 1 : 0);
                if (cnt != loc)
                    throw ZeroCertificationError("find_zeros: argument principle count " + std::to_string(cnt) +
                                                     " != located " + std::to_string(loc),
                                                 aa, bb);
            }
            throw ZeroCertificationError("find_zeros: argument principle count " + std::to_string(counted) +
                                             " != located " + std::to_string(located),
                                         lo, hi);
        }
        zc.argument_principle_count = counted;
        zc.certified_height = std::min(-lo, hi);
        std::vector<double> keep;
        for (double o : ords)
            if (std::abs(o) <= T) keep.push_back(o);
        std::sort(keep.begin(), keep.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a < b);
        });
        zc.zeros.resize(keep.size());
        parallel_for(static_cast<long>(keep.size()), opt.jobs, [&](long i) {
            cplx r(0.5, keep[i]);
            zc.zeros[i] = {r, l_derivative(chi, r), static_cast<int>(i + 1), ZeroKind::nontrivial};
        });
        for (const auto& z : zc.zeros)
            if (std::abs(z.l_prime) <= 1e-6)
                throw ZeroCertificationError("find_zeros: possibly multiple zero", z.rho.imag(), z.rho.imag());
        return zc;
    }
    throw ZeroCertificationError("find_zeros: unreachable", -T, T);
}

double ZeroCache::max_residual() const {
    double m = 0.0;
    for (const auto& z : zeros) m = std::max(m, std::abs(l_value(chi, z.rho)));
    return m;
}

ZeroCache restrict_zeros(const ZeroCache& z, double T) {
    if (T > z.T) throw std::invalid_argument("restrict_zeros: cache height too small");
    ZeroCache out = z;
    out.T = T;
    out.zeros.clear();
    for (const auto& r : z.zeros)
        if (std::abs(r.rho.imag()) <= T) out.zeros.push_back(r);
    return out;
}

nlohmann::json ZeroCache::to_json() const {
    nlohmann::json j;
    j["character"] = chi.to_json();
    j["T"] = T;
    j["argument_principle_count"] = argument_principle_count;
    j["certified_height"] = certified_height;
    auto dump = [](const LZero& z) {
        return nlohmann::json{{"re", z.rho.real()},
                              {"im", z.rho.imag()},
                              {"lprime_re", z.l_prime.real()},
                              {"lprime_im", z.l_prime.imag()},
                              {"kind", z.kind == ZeroKind::trivial ? "trivial" : "nontrivial"},
                              {"index", z.height_index}};
    };
    j["zeros"] = nlohmann::json::array();
    for (const auto& z : zeros) j["zeros"].push_back(dump(z));
    for (const auto& z : trivial) j["zeros"].push_back(dump(z));
    return j;
}

ZeroCache ZeroCache::from_json(const nlohmann::json& j) {
    ZeroCache zc{DirichletCharacter::from_json(j.at("character")), j.at("T").get<double>(), {}, {}, 0, 0};
    zc.argument_principle_count = j.at("argument_principle_count").get<long>();
    zc.certified_height = j.value("certified_height", zc.T);
    for (const auto& e : j.at("zeros")) {
        LZero z{{e.at("re").get<double>(), e.at("im").get<double>()},
                {e.at("lprime_re").get<double>(), e.at("lprime_im").get<double>()},
                e.at("index").get<int>(),
                e.at("kind").get<std::string>() == "trivial" ? ZeroKind::trivial : ZeroKind::nontrivial};
        (z.kind == ZeroKind::trivial ? zc.trivial : zc.zeros).push_back(z);
    }
    return zc;
}

ZeroCache load_or_find_zeros(const DirichletCharacter& chi, double T,
                             const std::optional<std::filesystem::path>& cache_dir,
                             const ZeroSearchOptions& opt) {
    namespace fs = std::filesystem;
    auto fname = [&](double t) {
        std::ostringstream os;
        os << "zeros_q" << chi.modulus() << "_k" << chi.generator_image_index() << "_T" << t << ".json";
        return os.str();
    };
    if (cache_dir && fs::is_directory(*cache_dir)) {
        std::vector<std::pair<double, fs::path>> cands;
        std::string prefix = "zeros_q" + std::to_string(chi.modulus()) + "_k" +
                             std::to_string(chi.generator_image_index()) + "_T";
        for (const auto& e : fs::directory_iterator(*cache_dir)) {
            std::string n = e.path().filename().string();
            if (n.rfind(prefix, 0) != 0 || e.path().extension() != ".json") continue;
            try {
                double t = std::stod(n.substr(prefix.size()));
                if (t >= T) cands.emplace_back(t, e.path());
            } catch (...) {
            }
        }
        std::sort(cands.begin(), cands.end());
        for (const auto& [t, p] : cands) {
            try {
                std::ifstream in(p);
                ZeroCache zc = ZeroCache::from_json(nlohmann::json::parse(in));
                if (!(zc.chi == chi) || zc.max_residual() >= 1e-8) continue;
                return zc.T == T ? zc : restrict_zeros(zc, T);
            } catch (...) {
            }
        }
    }
    ZeroCache zc = find_zeros(chi, T, opt);
    if (cache_dir) {
        fs::create_directories(*cache_dir);
        std::ofstream out(*cache_dir / fname(T));
        out << zc.to_json().dump(1) << "\n";
    }
    return zc;
}

cplx residue_inv_l(const DirichletCharacter&, const LZero& z, ResidueScaling scaling) {
    if (std::abs(z.l_prime) <= 1e-6)
        throw std::invalid_argument("residue_inv_l: |L'(rho)| below threshold, zero may not be simple");
    cplx r = 1.0 / z.l_prime;
    return scaling == ResidueScaling::half ? 0.5 * r : r;
}

}  // namespace msym
