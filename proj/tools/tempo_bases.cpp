// tempo-bases: construct temporal bases, identify LTI systems, run sliding
// transforms and the delay-decoding benchmark. All outputs are CSV or TBAS
// binary files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tempo_bases.hpp>

namespace tb = tempo_bases;

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit_config(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::cerr << "[" << cmd << "]";
    for (const auto& [k, v] : kv) std::cerr << ' ' << k << '=' << v;
    std::cerr << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_matrix(const std::string& path, const tb::Matrix& m) {
    if (path.empty() || path == "-") {
        tb::write_csv(std::cout, m);
    } else {
        tb::write_csv(path, m);
    }
}

void write_basis(const std::string& path, const tb::BasisMatrix& b) {
    if (ends_with(path, ".bin") || ends_with(path, ".tbas")) {
        tb::write_binary(path, b);
    } else {
        write_matrix(path, b.data);
    }
}

tb::BasisMatrix read_basis(const std::string& path) {
    if (ends_with(path, ".bin") || ends_with(path, ".tbas")) return tb::read_binary(path);
    tb::BasisMatrix b;
    b.data = tb::read_csv(path);
    if (b.data.rows() == 0) throw UsageError("'" + path + "' holds no matrix");
    b.kind = tb::BasisKind::Custom;
    return b;
}

tb::Vector read_signal(const std::string& path) {
    const tb::Matrix m = tb::read_csv(path);
    tb::Vector u(m.size());
    Eigen::Index i = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) u[i++] = m(r, c);
    return u;
}

void warn(const tb::Diagnostics& d) {
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
}

tb::BasisMatrix build_basis(const std::string& kind, std::size_t q, std::size_t n, const std::string& algo,
                            const std::string& sampling) {
    const tb::Sampling s = sampling == "naive" ? tb::Sampling::Naive : tb::Sampling::Mean;
    const auto k = tb::kind_from_name(kind);
    if (k == tb::BasisKind::Dlop) {
        if (algo == "direct") return tb::mk_dlop_basis_direct(q, n);
        if (algo == "linsys") return tb::mk_dlop_basis_linsys(q, n);
        return tb::mk_dlop_basis(q, n);
    }
    if (k == tb::BasisKind::LegendreMean || k == tb::BasisKind::LegendreNaive) {
        return tb::mk_leg_basis(q, n, k == tb::BasisKind::LegendreNaive ? tb::Sampling::Naive : s);
    }
    if (k == tb::BasisKind::Haar) return tb::mk_haar_basis(q, n, sampling == "mean" ? tb::Sampling::Mean : tb::Sampling::Naive);
    return tb::mk_basis(k, q, n);
}

const std::vector<std::string> kKinds{"fourier", "cosine", "legendre", "legendre-naive", "dlop", "haar", "ldn", "ldn-euler"};

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

tb::BenchConfig load_bench_config(const std::string& path) {
    tb::BenchConfig c;
    if (path.empty()) return c;
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open config '" + path + "'");
    const auto kv = tb::parse_flat_config(is);
    auto as_int = [](const tb::ConfigValue& v, const std::string& k) -> std::int64_t {
        if (auto* p = std::get_if<std::int64_t>(&v)) return *p;
        throw UsageError("config key '" + k + "' must be an integer");
    };
    auto as_num = [](const tb::ConfigValue& v, const std::string& k) -> double {
        if (auto* p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
        if (auto* p = std::get_if<double>(&v)) return *p;
        throw UsageError("config key '" + k + "' must be a number");
    };
    auto as_grid = [](const tb::ConfigValue& v, const std::string& k) {
        auto* p = std::get_if<std::vector<double>>(&v);
        if (!p) throw UsageError("config key '" + k + "' must be an array");
        std::vector<std::size_t> g;
        for (double x : *p) {
            if (x < 0 || x != std::floor(x)) throw UsageError("config key '" + k + "' needs non-negative integers");
            g.push_back(static_cast<std::size_t>(x));
        }
        return g;
    };
    for (const auto& [k, v] : kv) {
        if (k == "N") c.N = static_cast<std::size_t>(as_int(v, k));
        else if (k == "signal_len") c.signal_len = static_cast<std::size_t>(as_int(v, k));
        else if (k == "n_train_signals") c.n_train_signals = static_cast<std::size_t>(as_int(v, k));
        else if (k == "n_test_signals") c.n_test_signals = static_cast<std::size_t>(as_int(v, k));
        else if (k == "q_grid") c.q_grid = as_grid(v, k);
        else if (k == "theta_grid") c.theta_grid = as_grid(v, k);
        else if (k == "lowpass_cutoff_hz") c.lowpass_cutoff_hz = as_num(v, k);
        else if (k == "rcond") c.rcond = as_num(v, k);
        else if (k == "seed") c.seed = static_cast<std::uint64_t>(as_int(v, k));
        else if (k == "threads") c.threads = static_cast<std::size_t>(as_int(v, k));
        else if (k == "filtered") {
            auto* b = std::get_if<bool>(&v);
            if (!b) throw UsageError("config key 'filtered' must be true or false");
            c.filtered = *b;
        } else if (k == "engine") {
            auto* e = std::get_if<std::string>(&v);
            if (!e || (*e != "fir" && *e != "zoh")) throw UsageError("config key 'engine' must be \"fir\" or \"zoh\"");
            c.ldn_zoh = *e == "zoh";
        } else if (k == "bases") {
            auto* s = std::get_if<std::string>(&v);
            if (!s) throw UsageError("config key 'bases' must be a comma-separated string");
            c.bases.clear();
            std::stringstream ss(*s);
            std::string item;
            while (std::getline(ss, item, ',')) c.bases.push_back(tb::kind_from_name(item));
        } else {
            throw UsageError("unknown config key '" + k + "'");
        }
    }
    return c;
}

// Self-check: cross-module invariants at small sizes.
int run_check() {
    int pass = 0, fail = 0;
    auto check = [&](const std::string& name, const std::function<bool()>& f) {
        bool ok = false;
        try {
            ok = f();
        } catch (const std::exception& e) {
            std::cout << "  error: " << e.what() << '\n';
        }
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
        (ok ? pass : fail)++;
    };
    auto eye_err = [](const tb::BasisMatrix& b) {
        return (tb::gram(b) - tb::Matrix::Identity(b.q(), b.q())).cwiseAbs().maxCoeff();
    };
    check("fourier gram = I", [&] { return eye_err(tb::mk_fourier_basis(64, 64)) <= 1e-10; });
    check("cosine gram = I", [&] { return eye_err(tb::mk_cosine_basis(48, 64)) <= 1e-10; });
    check("haar gram = I at q = N = 64", [&] { return eye_err(tb::mk_haar_basis(64, 64)) <= 1e-12; });
    check("dlop recurrence = closed form at N = 128", [&] {
        return (tb::mk_dlop_basis(128, 128).data - tb::mk_dlop_basis_direct(128, 128).data).cwiseAbs().maxCoeff() <= 1e-7;
    });
    check("ldn identification round trip", [&] {
        const auto ref = tb::discretize_lti(tb::mk_ldn_lti(8), 128);
        const auto d = tb::reconstruct_discrete_lti(tb::mk_ldn_basis(8, 128));
        return (d.A_d - ref.A_d).cwiseAbs().maxCoeff() <= 1e-6 && (d.B_d - ref.B_d).cwiseAbs().maxCoeff() <= 1e-6;
    });
    check("ldn zoh columns = mean-sampled impulse response", [&] {
        tb::Matrix a = tb::mk_ldn_basis(8, 64).data;
        tb::Matrix b = tb::ldn_mean_sampled_impulse(8, 64);
        tb::row_normalize(b);
        return (a - b).cwiseAbs().maxCoeff() <= 1e-9;
    });
    check("fir runner = batch product", [&] {
        auto E = tb::mk_cosine_basis(8, 32);
        tb::SlidingFir fir(E);
        tb::Vector u = tb::Vector::LinSpaced(80, -1.0, 2.0).array().sin();
        double err = 0.0;
        for (Eigen::Index t = 0; t < u.size(); ++t) {
            const auto& m = fir.step(u[t]);
            if (t >= 31) err = std::max(err, (m - E.data * u.segment(t - 31, 32)).cwiseAbs().maxCoeff());
        }
        return err <= 1e-12;
    });
    check("structured euler = dense euler", [&] {
        const auto sys = tb::mk_ldn_lti(16);
        tb::SlidingEuler fast(sys, 1024);
        tb::SlidingLti dense(tb::discretize_euler(sys, 1024));
        double err = 0.0;
        for (int t = 0; t < 200; ++t) {
            const double u = std::sin(0.1 * t);
            err = std::max(err, (fast.step(u) - dense.step(u)).cwiseAbs().maxCoeff());
        }
        return !fast.dense_fallback() && err <= 1e-12;
    });
    check("bandlimit keeps coefficients", [&] {
        auto E = tb::mk_leg_basis(6, 40);
        tb::Vector u = tb::Vector::LinSpaced(40, 0.0, 5.0).array().cos();
        return (tb::apply_basis(E, tb::bandlimit_signal(E, u)) - tb::apply_basis(E, u)).cwiseAbs().maxCoeff() <= 1e-10;
    });
    check("lowpass filtering is idempotent", [&] {
        auto E = tb::mk_dlop_basis(20, 50);
        auto f1 = tb::lowpass_filter_basis(E, 20);
        tb::BasisMatrix raw = E;
        raw.data = f1.data;
        return (tb::lowpass_filter_basis(raw, 20).data - f1.data).cwiseAbs().maxCoeff() <= 1e-10;
    });
    check("undiscretize inverts discretize", [&] {
        const auto s = tb::mk_ldn_lti(6);
        const auto r = tb::undiscretize_lti(tb::discretize_lti(s, 64));
        return (r.A - s.A).cwiseAbs().maxCoeff() <= 1e-8 && (r.B - s.B).cwiseAbs().maxCoeff() <= 1e-8;
    });
    check("csv round trip is lossless", [&] {
        const auto E = tb::mk_fourier_basis(7, 13);
        std::stringstream ss;
        tb::write_csv(ss, E.data);
        return tb::read_csv(ss) == E.data;
    });
    std::cout << pass << " passed, " << fail << " failed\n";
    return fail == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal basis transformations, LDN systems and delay-decoding benchmarks"};
    app.require_subcommand(1);

    // basis
    std::string kind = "fourier", algo = "recurrence", sampling = "mean", out;
    std::size_t q = 16, n = 128;
    auto* basis = app.add_subcommand("basis", "Build a basis transformation matrix");
    basis->add_option("--kind", kind, "Basis kind")->check(CLI::IsMember(kKinds));
    basis->add_option("--q", q, "Number of basis functions")->check(CLI::PositiveNumber);
    basis->add_option("--n", n, "Window length in samples")->check(CLI::PositiveNumber);
    basis->add_option("--algo", algo, "DLOP construction")->check(CLI::IsMember({"recurrence", "direct", "linsys"}));
    basis->add_option("--sampling", sampling, "Legendre/Haar sampling")->check(CLI::IsMember({"naive", "mean"}));
    basis->add_option("--out", out, "Output file (.csv, or .bin for TBAS binary); stdout if omitted");

    // ldn
    std::string emit_ldn = "basis";
    std::size_t steps = 0, trials = 64;
    std::uint64_t seed = 1;
    std::vector<double> fhat{0, 4, 8, 16, 32, 64};
    auto* ldn = app.add_subcommand("ldn", "LDN basis, impulse response or band-limit spectrum");
    ldn->add_option("--q", q)->check(CLI::PositiveNumber);
    ldn->add_option("--n", n)->check(CLI::PositiveNumber);
    ldn->add_option("--emit", emit_ldn)->check(CLI::IsMember({"basis", "impulse", "spectrum", "euler"}));
    ldn->add_option("--steps", steps, "Impulse response length (default 2N)");
    ldn->add_option("--fhat", fhat, "Band limits for --emit spectrum");
    ldn->add_option("--trials", trials)->check(CLI::PositiveNumber);
    ldn->add_option("--seed", seed);
    ldn->add_option("--out", out);

    // lti
    std::string from, dampen = "none", emit_lti = "system";
    double theta = 1.0;
    auto* lti = app.add_subcommand("lti", "Identify an LTI system from a basis matrix");
    lti->add_option("--from", from, "Basis matrix (.csv or .bin); files hold normalized rows, so the result is similar to the unnormalized one through a diagonal scaling")->required();
    lti->add_option("--dampen", dampen)->check(CLI::IsMember({"none", "lstsq", "erasure"}));
    lti->add_option("--theta", theta)->check(CLI::PositiveNumber);
    lti->add_option("--emit", emit_lti)->check(CLI::IsMember({"system", "discrete", "impulse"}));
    lti->add_option("--steps", steps, "Impulse response length (default 2N)");
    lti->add_option("--out", out);

    // filter
    std::string fbasis = "dlop";
    std::size_t qprime = 0;
    bool renormalize = false;
    auto* filter = app.add_subcommand("filter", "Low-pass filter a basis through the Fourier basis");
    filter->add_option("--basis", fbasis)->check(CLI::IsMember(kKinds));
    filter->add_option("--q", q)->check(CLI::PositiveNumber);
    filter->add_option("--n", n)->check(CLI::PositiveNumber);
    filter->add_option("--qprime", qprime, "Fourier rows kept (default q)");
    filter->add_flag("--renormalize", renormalize, "Scale filtered rows to unit norm");
    filter->add_option("--out", out);

    // slide
    std::string sbasis = "ldn", engine = "fir", input;
    auto* slide = app.add_subcommand("slide", "Per-sample coefficients of a signal");
    slide->add_option("--basis", sbasis)->check(CLI::IsMember(kKinds));
    slide->add_option("--q", q)->check(CLI::PositiveNumber);
    slide->add_option("--n", n)->check(CLI::PositiveNumber);
    slide->add_option("--engine", engine)->check(CLI::IsMember({"fir", "zoh", "euler"}));
    slide->add_option("--input", input, "Signal CSV (all values read in order)")->required();
    slide->add_option("--out", out);

    // bench
    std::string config, outdir = "results";
    bool full_scale = false, filtered = false;
    std::size_t threads = 0;
    auto* bench = app.add_subcommand("bench", "Delay-decoding benchmark");
    bench->add_option("--config", config, "Flat key = value config file");
    bench->add_option("--out", outdir, "Output directory");
    auto* seed_opt = bench->add_option("--seed", seed);
    bench->add_flag("--full-scale", full_scale, "51 x 51 grid, 1000 signals");
    bench->add_flag("--filtered", filtered, "Also run low-pass filtered bases");
    bench->add_option("--threads", threads);
    std::string bench_engine = "fir";
    auto* engine_opt = bench->add_option("--engine", bench_engine, "LDN decoding source")->check(CLI::IsMember({"fir", "zoh"}));

    auto* check = app.add_subcommand("check", "Run the invariant self-check suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*basis) {
            emit_config("basis", {{"kind", kind}, {"q", std::to_string(q)}, {"n", std::to_string(n)},
                                  {"algo", algo}, {"sampling", sampling}, {"out", out.empty() ? "-" : out}});
            const auto b = build_basis(kind, q, n, algo, sampling);
            warn(b.diagnostics);
            write_basis(out, b);
        } else if (*ldn) {
            if (steps == 0) steps = 2 * n;
            emit_config("ldn", {{"q", std::to_string(q)}, {"n", std::to_string(n)}, {"emit", emit_ldn},
                                {"steps", std::to_string(steps)}, {"trials", std::to_string(trials)},
                                {"seed", std::to_string(seed)}, {"out", out.empty() ? "-" : out}});
            if (emit_ldn == "basis") {
                write_basis(out, tb::mk_ldn_basis(q, n));
            } else if (emit_ldn == "euler") {
                const auto b = tb::mk_ldn_basis_euler(q, n);
                warn(b.diagnostics);
                write_basis(out, b);
            } else if (emit_ldn == "impulse") {
                write_matrix(out, tb::impulse_response(tb::discretize_lti(tb::mk_ldn_lti(q), n), steps));
            } else {
                const auto r = tb::spectrum_nrmse(q, n, fhat, {trials, seed});
                tb::Matrix m(static_cast<Eigen::Index>(r.size()), 2);
                for (std::size_t i = 0; i < r.size(); ++i) {
                    m(static_cast<Eigen::Index>(i), 0) = fhat[i];
                    m(static_cast<Eigen::Index>(i), 1) = r[i];
                }
                write_matrix(out, m);
            }
        } else if (*lti) {
            emit_config("lti", {{"from", from}, {"dampen", dampen}, {"theta", tb::format_double(theta)},
                                {"emit", emit_lti}, {"out", out.empty() ? "-" : out}});
            const auto b = read_basis(from);
            tb::ReconstructionConfig cfg;
            cfg.theta = theta;
            cfg.dampen = dampen == "lstsq" ? tb::Dampening::Lstsq
                         : dampen == "erasure" ? tb::Dampening::Erasure : tb::Dampening::None;
            tb::Diagnostics diag;
            const auto d = tb::reconstruct_discrete_lti(b, cfg, &diag);
            warn(diag);
            if (emit_lti == "impulse") {
                write_matrix(out, tb::impulse_response(d, steps ? steps : 2 * d.N));
            } else {
                // q rows: the feedback row followed by the input entry
                tb::Matrix m(d.A_d.rows(), d.A_d.cols() + 1);
                if (emit_lti == "discrete") {
                    m << d.A_d, d.B_d;
                } else {
                    const auto s = tb::undiscretize_lti(d, theta);
                    m << s.A, s.B;
                }
                write_matrix(out, m);
            }
        } else if (*filter) {
            if (qprime == 0) qprime = q;
            emit_config("filter", {{"basis", fbasis}, {"q", std::to_string(q)}, {"n", std::to_string(n)},
                                   {"qprime", std::to_string(qprime)}, {"renormalize", renormalize ? "true" : "false"},
                                   {"out", out.empty() ? "-" : out}});
            const auto f = tb::lowpass_filter_basis(build_basis(fbasis, q, n, "recurrence", "mean"), qprime);
            write_matrix(out, renormalize ? f.as_basis().data : f.data);
        } else if (*slide) {
            emit_config("slide", {{"basis", sbasis}, {"q", std::to_string(q)}, {"n", std::to_string(n)},
                                  {"engine", engine}, {"input", input}, {"out", out.empty() ? "-" : out}});
            const tb::Vector u = read_signal(input);
            tb::Matrix coeffs(u.size(), static_cast<Eigen::Index>(q));
            if (engine == "fir") {
                tb::SlidingFir fir(build_basis(sbasis, q, n, "recurrence", "mean"));
                for (Eigen::Index t = 0; t < u.size(); ++t) coeffs.row(t) = fir.step(u[t]).transpose();
            } else {
                if (sbasis != "ldn") throw UsageError("--engine " + engine + " runs the LDN system only");
                if (engine == "zoh") {
                    tb::SlidingLti r(tb::discretize_lti(tb::mk_ldn_lti(q), n));
                    for (Eigen::Index t = 0; t < u.size(); ++t) coeffs.row(t) = r.step(u[t]).transpose();
                } else {
                    tb::SlidingEuler r(tb::mk_ldn_lti(q), n);
                    if (r.diverged()) std::cerr << "warning: Euler LDN diverges for this q and N\n";
                    for (Eigen::Index t = 0; t < u.size(); ++t) coeffs.row(t) = r.step(u[t]).transpose();
                }
            }
            write_matrix(out, coeffs);
        } else if (*bench) {
            auto cfg = load_bench_config(config);
            if (full_scale) {
                cfg.q_grid = tb::linspace_grid(1.0, static_cast<double>(cfg.N), 51);
                cfg.theta_grid = tb::linspace_grid(0.0, static_cast<double>(cfg.N - 1), 51);
                cfg.n_train_signals = cfg.n_test_signals = 1000;
            }
            if (*seed_opt) cfg.seed = seed;
            if (filtered) cfg.filtered = true;
            if (threads) cfg.threads = threads;
            if (*engine_opt) cfg.ldn_zoh = bench_engine == "zoh";
            cfg = tb::resolve(cfg);
            std::string bases;
            for (auto k : cfg.bases) bases += (bases.empty() ? "" : ",") + std::string(tb::kind_name(k));
            emit_config("bench", {{"N", std::to_string(cfg.N)}, {"signal_len", std::to_string(cfg.signal_len)},
                                  {"n_train_signals", std::to_string(cfg.n_train_signals)},
                                  {"n_test_signals", std::to_string(cfg.n_test_signals)},
                                  {"q_grid", join(cfg.q_grid)}, {"theta_grid", join(cfg.theta_grid)},
                                  {"lowpass_cutoff_hz", tb::format_double(cfg.lowpass_cutoff_hz)},
                                  {"rcond", tb::format_double(cfg.rcond)}, {"seed", std::to_string(cfg.seed)},
                                  {"filtered", cfg.filtered ? "true" : "false"}, {"bases", bases},
                                  {"engine", cfg.ldn_zoh ? "zoh" : "fir"},
                                  {"threads", std::to_string(tb::bench_thread_count(cfg.threads))}, {"out", outdir}});
            const auto res = tb::run_benchmark(cfg);
            std::filesystem::create_directories(outdir);
            for (const auto& g : res.grids) {
                for (const auto& line : g.log) std::cerr << "bench: " << g.name() << ": " << line << '\n';
                std::ofstream os(outdir + "/grid_" + g.name() + ".csv");
                os << "q\\theta";
                for (auto t : g.theta_grid) os << ',' << t;
                os << '\n';
                for (std::size_t i = 0; i < g.q_grid.size(); ++i) {
                    os << g.q_grid[i];
                    for (Eigen::Index j = 0; j < g.rmse.cols(); ++j) os << ',' << tb::format_double(g.rmse(static_cast<Eigen::Index>(i), j));
                    os << '\n';
                }
            }
            std::ofstream os(outdir + "/summary.csv");
            os << "basis,E,se,n_signals,n_train_signals,seed\n";
            for (const auto& r : tb::summarize(res.grids)) {
                os << r.basis << ',' << tb::format_double(r.E) << ',' << tb::format_double(r.se) << ','
                   << cfg.n_test_signals << ',' << cfg.n_train_signals << ',' << cfg.seed << '\n';
                std::cout << r.basis << " E=" << r.E << " se=" << r.se << '\n';
            }
        } else if (*check) {
            return run_check();
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const tb::InsufficientColumnsError& e) {
        std::cerr << "numerical failure: insufficient columns: " << e.what() << '\n';
        return kNumerical;
    } catch (const tb::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const tb::ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    return 0;
}
