// msym: command-line front end.
// Exit codes: 0 ok, 1 verification failure, 2 configuration error, 3 numerical certification failure.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "msym/acceptance.hpp"
#include "msym/config.hpp"
#include "msym/formulas.hpp"

namespace fs = std::filesystem;
using namespace msym;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string curve;
    long modulus = 11;
    std::optional<long> generator_index;
    std::string chi2;
    std::string z = "0,1";
    double x_min = 1e3, x_max = 0;  // 0: command default
    int x_count = 41;
    double T = 40;
    long n_max = 12, k_max = 8, c_max = kDefaultCMax;
    std::string cache_dir;
    std::string out;
    int jobs = 0;
    std::string ordering = "geometric";
    std::string level = "quick";
    std::string report;
    long terms = 200;
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<fs::path> cache_dir(const Options& o) {
    if (!o.cache_dir.empty()) return fs::path(o.cache_dir);
    if (const char* e = std::getenv("MSYM_CACHE_DIR"); e && *e) return fs::path(e);
    return fs::path(".msym-cache");
}

// "e2pi/5", "e2pi*3/10", "1", "-1"
cplx parse_root_of_unity(const std::string& s) {
    if (s == "1") return 1.0;
    if (s == "-1") return -1.0;
    std::smatch m;
    static const std::regex re(R"(e2pi(?:\*(-?\d+))?/(\d+))");
    if (!std::regex_match(s, m, re)) throw ConfigError("cannot parse character value '" + s + "'");
    long j = m[1].matched ? std::stol(m[1]) : 1, q = std::stol(m[2]);
    if (q <= 0) throw ConfigError("bad denominator in '" + s + "'");
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(q));
}

DirichletCharacter character(const Options& o) {
    if (!is_prime(o.modulus)) throw ConfigError("--modulus must be prime");
    if (o.generator_index && !o.chi2.empty()) throw ConfigError("give either --chi-generator-image or --chi2");
    if (o.generator_index) return DirichletCharacter::make(o.modulus, *o.generator_index);
    if (o.chi2.empty()) {
        if (o.modulus == 11) return DirichletCharacter::make(11, 2);
        if (o.modulus == 17) return DirichletCharacter::make(17, 8);
        throw ConfigError("no default character for this modulus; give --chi-generator-image or --chi2");
    }
    const cplx want = parse_root_of_unity(o.chi2);
    std::optional<DirichletCharacter> hit;
    for (long k = 0; k < o.modulus - 1; ++k) {
        auto c = DirichletCharacter::make(o.modulus, k);
        if (std::abs(c(2) - want) < 1e-9) {
            if (hit) throw ConfigError("--chi2 does not determine the character (2 is not a primitive root)");
            hit = c;
        }
    }
    if (!hit) throw ConfigError("no character mod " + std::to_string(o.modulus) + " takes that value at 2");
    return *hit;
}

std::string curve_label(const Options& o) {
    if (!o.curve.empty()) return o.curve;
    if (o.modulus == 11) return "E11a";
    if (o.modulus == 17) return "E17a";
    throw ConfigError("no default curve of level " + std::to_string(o.modulus) + "; give --curve");
}

std::unique_ptr<CuspForm> make_form(const Options& o) {
    const Curve& c = curve_by_label(curve_label(o));
    if (c.level != o.modulus) throw ConfigError("curve level " + std::to_string(c.level) + " != --modulus");
    return std::make_unique<CuspForm>(c);
}

cplx parse_z(const std::string& s) {
    if (s == "i") return {0, 1};
    auto k = s.find(',');
    if (k == std::string::npos) throw ConfigError("--z expects x,y");
    try {
        cplx z(std::stod(s.substr(0, k)), std::stod(s.substr(k + 1)));
        if (!(z.imag() > 0)) throw ConfigError("--z needs y > 0");
        return z;
    } catch (const std::logic_error&) {
        throw ConfigError("--z expects x,y");
    }
}

TruncationSpec truncation(const Options& o) {
    TruncationSpec t;
    t.T = o.T;
    t.n_max = o.n_max;
    t.k_max = o.k_max;
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return t;
}

std::vector<double> grid(const Options& o) {
    if (o.x_count < 2 || !(o.x_min > 0) || !(o.x_max > o.x_min)) throw ConfigError("need 0 < --x-min < --x-max, --x-count >= 2");
    return log_grid(o.x_min, o.x_max, o.x_count);
}

// writes to --out, or stdout
template <class Fn>
void emit(const Options& o, Fn&& fn) {
    if (o.out.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw ConfigError("cannot write " + o.out);
    fn(f);
}

ZeroCache zeros_for(const DirichletCharacter& chi, double T, const Options& o) {
    return load_or_find_zeros(chi, T, cache_dir(o), ZeroSearchOptions{.jobs = o.jobs});
}

int cmd_zeros(const Options& o) {
    auto chi = character(o);
    if (o.T < 0) throw ConfigError("--T must be >= 0");
    auto zc = zeros_for(chi, o.T, o);
    if (zc.T > o.T) zc = restrict_zeros(zc, o.T);
    std::printf("# %s  T=%g  nontrivial zeros: %zu  argument principle: %ld\n", chi.label().c_str(), o.T,
                zc.zeros.size(), zc.argument_principle_count);
    std::printf("%4s %22s %22s %14s\n", "#", "re(rho)", "im(rho)", "|L'(rho)|");
    int i = 0;
    for (auto& z : zc.zeros)
        std::printf("%4d %22.15f %22.15f %14.6e\n", ++i, z.rho.real(), z.rho.imag(), std::abs(z.l_prime));
    for (auto& z : zc.trivial) std::printf("   t %22.15f %22.15f %14.6e\n", z.rho.real(), z.rho.imag(), std::abs(z.l_prime));
    if (!o.out.empty()) emit(o, [&](std::ostream& f) { f << zc.to_json().dump(1) << "\n"; });
    return 0;
}

int cmd_figure1(const Options& o) {
    auto f = make_form(o);
    auto chi = character(o);
    cplx z = parse_z(o.z);
    auto tr = truncation(o);
    auto g = grid(o);
    auto zc = zeros_for(chi, tr.T, o), zcb = zeros_for(chi.conj(), tr.T, o);
    Thm11MainTerm mt(*f, zc, zcb, z, MainTermMode::residue, tr);
    std::vector<double> blue;
    for (double X : g) blue.push_back(std::abs(mt(X)));
    emit(o, [&](std::ostream& out) {
        out << "# curve: " << f->curve().label << "\n# character: " << chi.label() << "\n# z: " << g17(z.real()) << ","
            << g17(z.imag()) << "\n# T: " << tr.T << "\n# n_max: " << tr.n_max << "\n# zero_terms: " << mt.terms()
            << "\n# mode: residue\n";
        out << "X,abs_main_term,red_reference\n";
        for (std::size_t i = 0; i < g.size(); ++i)
            out << g17(g[i]) << "," << g17(blue[i]) << "," << g17(1e-4 * std::pow(g[i], 0.75)) << "\n";
    });
    std::fprintf(stderr, "slope of |main term|: %.4f\n", loglog_slope(g, blue));
    return 0;
}

int cmd_sums(const Options& o) {
    auto f = make_form(o);
    auto chi = character(o);
    auto tr = truncation(o);
    auto g = grid(o);
    SymbolTable tab(*f, o.c_max);
    auto zc = zeros_for(chi, tr.T, o), zcb = zeros_for(chi.conj(), tr.T, o);
    const double kappa = kCosetFactor;
    if (o.ordering == "geometric") {
        cplx z = parse_z(o.z);
        auto s = geometric_twisted_sum(tab, chi, z, g, o.jobs);
        s.validate();
        Thm11MainTerm mt(*f, zc, zcb, z, MainTermMode::residue, tr);
        emit(o, [&](std::ostream& out) {
            out << "# coset_factor: " << kCosetFactor << " (value columns are the +-(c,d) sum)\n# T: " << tr.T
                << "\n# n_max: " << tr.n_max << "\n# formula: main term, residue mode\n";
            for (auto& [k, v] : s.meta) out << "# " << k << ": " << v << "\n";
            if (s.truncated) out << "# truncated: " << s.error << "\n";
            out << "X,re,im,abs,main_re,main_im,residual_abs\n";
            for (std::size_t i = 0; i < s.x_grid.size(); ++i) {
                cplx v = kappa * s.values[i], m = mt(s.x_grid[i]);
                out << g17(s.x_grid[i]) << "," << g17(v.real()) << "," << g17(v.imag()) << "," << g17(std::abs(v))
                    << "," << g17(m.real()) << "," << g17(m.imag()) << "," << g17(std::abs(v - m)) << "\n";
            }
        });
        return 0;
    }
    if (o.ordering != "arithmetic") throw ConfigError("--ordering must be geometric or arithmetic");
    SumTrace s;
    try {
        s = arithmetic_twisted_sum(tab, chi, g, o.jobs);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    s.validate();
    Thm15Rhs printed(*f, zc, zcb, tr), derived(*f, zc, zcb, tr, Thm15Variant::derived);
    emit(o, [&](std::ostream& out) {
        out << "# coset_factor: " << kCosetFactor << " (value columns are the +-(c,d) sum)\n# T: " << tr.T
            << "\n# formula: explicit formula as printed (rhs) and rederived (derived)\n";
        for (auto& [k, v] : s.meta) out << "# " << k << ": " << v << "\n";
        if (s.truncated) out << "# truncated: " << s.error << "\n";
        out << "X,re,im,abs,rhs_re,rhs_im,residual_abs,derived_re,derived_im,derived_residual_abs\n";
        for (std::size_t i = 0; i < s.x_grid.size(); ++i) {
            const double X = s.x_grid[i];
            cplx v = kappa * s.values[i], p = printed(X), d = kappa * derived(X);
            out << g17(X) << "," << g17(v.real()) << "," << g17(v.imag()) << "," << g17(std::abs(v)) << ","
                << g17(p.real()) << "," << g17(p.imag()) << "," << g17(std::abs(v - p)) << "," << g17(d.real()) << ","
                << g17(d.imag()) << "," << g17(std::abs(v - d)) << "\n";
        }
    });
    return 0;
}

int cmd_verify(const Options& o) {
    AcceptanceOptions opt;
    opt.level = o.level == "full" ? VerifyLevel::full : VerifyLevel::quick;
    opt.cache_dir = cache_dir(o);
    opt.jobs = o.jobs;
    auto res = run_acceptance(opt, &std::cout);
    auto rep = acceptance_report(res, opt.level);
    if (!o.report.empty()) {
        std::ofstream f(o.report);
        if (!f) throw ConfigError("cannot write " + o.report);
        f << rep.dump(2) << "\n";
    }
    bool ok = rep["pass"].get<bool>();
    std::cout << (ok ? "verify: all criteria passed" : "verify: FAILED") << std::endl;
    return ok ? 0 : 1;
}

int cmd_coeffs(const Options& o) {
    auto f = make_form(o);
    if (o.terms < 1) throw ConfigError("--terms must be positive");
    auto a = f->coeffs(o.terms);
    emit(o, [&](std::ostream& out) {
        out << "# curve: " << f->curve().label << "\nn,a_n\n";
        for (long n = 1; n <= o.terms; ++n) out << n << "," << a[n] << "\n";
    });
    return 0;
}

int cmd_symbols(const Options& o) {
    auto f = make_form(o);
    const long N = f->level();
    if (o.c_max < N) throw ConfigError("--c-max below the level");
    SymbolTable tab(*f, o.c_max);
    emit(o, [&](std::ostream& out) {
        out << "# curve: " << f->curve().label << "\n# symbols <gamma, f> for gamma = (a b; c d), 0 <= d < c\n";
        out << "c,d,re,im\n";
        double_coset_enum(N, o.c_max, [&](const GroupElement& g, const DoubleCosetKey& k) {
            cplx v = tab.symbol(g);
            out << k.c << "," << k.d_mod_c << "," << g17(v.real()) << "," << g17(v.imag()) << "\n";
        });
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted sums of modular symbols: zeros, main terms, brute-force sums, acceptance checks"};
    app.require_subcommand(1);
    Options o;
    long gen = -1;

    auto character_opts = [&](CLI::App* s) {
        s->add_option("--modulus", o.modulus, "prime modulus (= curve level)");
        s->add_option("--chi-generator-image", gen, "k with chi(g) = e^{2 pi i k/(q-1)}, g least primitive root");
        s->add_option("--chi2,--character", o.chi2, "value of chi(2): e2pi/5, e2pi*3/10, 1 or -1");
    };
    auto common = [&](CLI::App* s) {
        s->add_option("--curve", o.curve, "curve label (E11a, E17a)");
        s->add_option("--cache-dir", o.cache_dir, "cache directory (default $MSYM_CACHE_DIR or .msym-cache)");
        s->add_option("--out", o.out, "output file (default stdout)");
        s->add_option("--jobs", o.jobs, "worker threads (0: all cores)");
    };
    auto range = [&](CLI::App* s) {
        s->add_option("--z", o.z, "base point x,y");
        s->add_option("--x-min", o.x_min);
        s->add_option("--x-max", o.x_max);
        s->add_option("--x-count", o.x_count);
        s->add_option("--T", o.T, "zero height");
        s->add_option("--n-max", o.n_max, "Fourier modes");
        s->add_option("--k-max", o.k_max);
    };

    auto* zeros = app.add_subcommand("zeros", "certified zeros of L(s, chi) up to height T");
    character_opts(zeros);
    common(zeros);
    zeros->add_option("--T", o.T, "zero height");

    auto* fig = app.add_subcommand("figure1", "|main term| and 1e-4 X^{3/4} on a log grid");
    character_opts(fig);
    common(fig);
    range(fig);

    auto* sums = app.add_subcommand("sums", "brute-force twisted sums with formula columns");
    character_opts(sums);
    common(sums);
    range(sums);
    sums->add_option("--ordering", o.ordering, "geometric or arithmetic")
        ->check(CLI::IsMember({"geometric", "arithmetic"}));
    sums->add_option("--c-max", o.c_max, "largest c for modular symbols");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--level", o.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("--report", o.report, "JSON report path");
    verify->add_option("--cache-dir", o.cache_dir, "cache directory");
    verify->add_option("--jobs", o.jobs, "worker threads");

    auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients a_n of the curve's newform");
    common(coeffs);
    coeffs->add_option("--modulus", o.modulus, "level");
    coeffs->add_option("--terms", o.terms, "number of coefficients");

    auto* symbols = app.add_subcommand("symbols", "modular symbols for all c <= c-max");
    common(symbols);
    symbols->add_option("--modulus", o.modulus, "level");
    symbols->add_option("--c-max", o.c_max, "largest c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (gen >= 0) o.generator_index = gen;
    if (o.x_max == 0) o.x_max = fig->parsed() ? 1e6 : 1e5;

    try {
        if (zeros->parsed()) return cmd_zeros(o);
        if (fig->parsed()) return cmd_figure1(o);
        if (sums->parsed()) return cmd_sums(o);
        if (verify->parsed()) return cmd_verify(o);
        if (coeffs->parsed()) return cmd_coeffs(o);
        if (symbols->parsed()) return cmd_symbols(o);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroCertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
