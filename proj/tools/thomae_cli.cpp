// Command-line driver: runs one pipeline and writes a JSON report. Exit code 0 iff every check passes.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "thomae/cohomology.hpp"
#include "thomae/periods.hpp"
#include "thomae/residue.hpp"
#include "thomae/spinor.hpp"

using namespace thomae;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "thomae-report/1";

struct Config {
    std::string command;
    std::string curve_file;
    std::string tau_file;
    int n = 2;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    std::string out;
};

// Stage failures carry the stage name into the error report.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string s, const std::string& what) : std::runtime_error(what), stage(std::move(s)) {}
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw Error("complex numbers are written as [re, im]");
}

json matrix_json(const MatrixXc& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json int_matrix_json(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json point_json(const LPoint& p) {
    json c = json::array();
    for (int i = 0; i < p.coords().size(); ++i) c.push_back(p[i]);
    return c;
}

std::string rational_string(const Rational& r) { return r.str(); }

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return json::parse(in);
}

// {"branch_points": [[re, im] x 6]} or {"coefficients": [[re, im] x 7]}, constant term first
HyperellipticCurve read_curve(const std::string& path) {
    const json j = read_json(path);
    if (j.contains("branch_points")) {
        std::vector<cplx> e;
        for (const auto& v : j.at("branch_points")) e.push_back(complex_from(v));
        return HyperellipticCurve(e);
    }
    if (j.contains("coefficients")) {
        Poly f;
        for (const auto& v : j.at("coefficients")) f.push_back(complex_from(v));
        return HyperellipticCurve::from_coefficients(f);
    }
    throw Error("curve file needs \"branch_points\" or \"coefficients\"");
}

HyperellipticCurve default_curve() {
    std::vector<cplx> e;
    for (int k = 0; k < 6; ++k) e.push_back(std::polar(1.0, kPi * k / 3));
    return HyperellipticCurve(e);
}

// {"tau": [[[re, im], ...], ...]}
PeriodMatrix read_tau(const std::string& path) {
    const json j = read_json(path).at("tau");
    const int g = static_cast<int>(j.size());
    MatrixXc t(g, g);
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c) t(r, c) = complex_from(j.at(r).at(c));
    return PeriodMatrix(t);
}

class Report {
public:
    explicit Report(const Config& c) {
        doc_["schema"] = kSchema;
        doc_["command"] = c.command;
        doc_["config"] = {{"N", c.n}, {"seed", c.seed}, {"tol", c.tol}, {"curve", c.curve_file}, {"tau", c.tau_file}};
        doc_["checks"] = json::array();
    }

    /// A numeric check `value < tolerance`.
    void below(const std::string& name, double value, double tolerance) {
        add(name, value < tolerance, {{"value", value}, {"tolerance", tolerance}});
    }
    void holds(const std::string& name, bool ok, json witness = json::object()) {
        add(name, ok, std::move(witness));
    }

    json& data(const std::string& key) { return doc_["data"][key]; }
    bool passed() const { return passed_; }

    json finish() {
        doc_["passed"] = passed_;
        return doc_;
    }

private:
    void add(const std::string& name, bool ok, json witness) {
        json c = {{"name", name}, {"pass", ok}};
        for (auto& [k, v] : witness.items()) c[k] = v;
        doc_["checks"].push_back(c);
        passed_ = passed_ && ok;
    }
    json doc_;
    bool passed_ = true;
};

// ---------------------------------------------------------------- torus-moduli

void torus_moduli(const Config& cfg, Report& rep) {
    const PeriodMatrix tau = stage("parse", [&] {
        if (cfg.tau_file.empty()) throw Error("torus-moduli needs --tau");
        return read_tau(cfg.tau_file);
    });
    const int n = cfg.n, g = tau.g();
    std::mt19937_64 rng(cfg.seed);
    auto family = std::make_shared<AnalyticWeilFamily>(n, tau);
    const auto pts = all_points(n, g);

    const Eigen::MatrixXi table = stage("weil_pairing", [&] {
        double snap = 1.0;
        auto t = weil_pairing_table(*family, family->sample_point(rng), 1e-6, &snap);
        rep.below("weil pairing snap distance", snap, 1e-6);
        return t;
    });
    rep.data("weil_pairing") = int_matrix_json(table);
    rep.holds("weil pairing nondegenerate", pairing_nondegenerate(table, n));
    bool matches = true;
    for (const auto& p : pts)
        for (const auto& q : pts) {
            const cplx e = analytic_weil_pairing(Characteristic::from_point(p), Characteristic::from_point(q));
            matches = matches && snap_root(e, n).root.exponent == table(p.index(), q.index());
        }
    rep.holds("weil pairing equals exp(2 pi i N (e.b - a.f))", matches);

    const NormalizationResult r = stage("normalize", [&] {
        return symmetric_refine(igusa_alpha(family, analytic_normal_pairing(n, g), Eigen::VectorXi::Zero(2 * g), rng));
    });
    rep.below("normal set residual", normal_set_residual(r, 20, rng), 1e-7);

    const VectorXc m = stage("moduli", [&] { return moduli_point(r, VectorXc::Zero(g)); });
    json entries = json::array();
    double worst = 0.0;
    int flagged = 0;
    for (const auto& p : pts) {
        const cplx q = family->quotient(p, VectorXc::Zero(g));
        const cplx expect = std::pow(q, n);
        const cplx got = m(p.index());
        const bool amb = r.ambiguous[p.index()];
        flagged += amb;
        const double err = amb ? std::abs(got * got - expect * expect) / std::max(1.0, std::abs(expect * expect))
                               : std::abs(got - expect) / std::max(1.0, std::abs(expect));
        worst = std::max(worst, err);
        entries.push_back({{"P", point_json(p)},
                           {"value", complex_json(got)},
                           {"square", complex_json(got * got)},
                           {"theta_constant_power", complex_json(expect)},
                           {"sign_ambiguous", amb}});
    }
    rep.data("tau") = matrix_json(tau.tau());
    rep.data("moduli") = entries;
    rep.data("flagged") = flagged;
    rep.holds("P = 0 entry is 1", std::abs(m(0) - 1.0) < 1e-12);
    rep.below("moduli against theta constants (squares where flagged)", worst, cfg.tol);
}

// ---------------------------------------------------------------- curve-thomae

void curve_thomae(const Config& cfg, Report& rep) {
    const HyperellipticCurve c = stage("parse", [&] {
        if (cfg.curve_file.empty()) throw Error("curve-thomae needs --curve");
        return read_curve(cfg.curve_file);
    });
    if (cfg.n != 2) throw StageError("parse", "the determinantal pipeline is implemented for N = 2 only");
    std::mt19937_64 rng(cfg.seed);
    json bp = json::array();
    for (cplx e : c.branch_points()) bp.push_back(complex_json(e));
    rep.data("branch_points") = bp;

    const JacobianFrame f = stage("period_matrix", [&] { return JacobianFrame(c); });
    rep.data("tau") = matrix_json(f.tau().tau());
    rep.below("tau symmetry before symmetrization", f.symmetry_residual(), 1e-10);
    rep.below("Riemann bilinear relation", f.riemann_residual(), 1e-10);
    rep.below("quadrature refinement change", f.refinement_change(), 1e-10);

    json torsion = json::array();
    stage("torsion", [&] {
        for (const auto& t : two_torsion_divisors(c)) {
            const auto tc = torsion_characteristic(f, t.divisor, 2);
            torsion.push_back({{"divisor", t.label()}, {"P", point_json(tc.chi.to_point())}, {"residual", tc.residual}});
        }
        return 0;
    });
    rep.data("torsion") = torsion;

    const ThomaeReport tr = stage("thomae_compare", [&] { return thomae_compare(f, rng, 20); });
    rep.data("delta") = tr.delta_label;
    json per_delta = json::object();
    for (const auto& [label, cov] : tr.per_delta) per_delta[label] = cov;
    rep.data("constancy_by_delta") = per_delta;
    json entries = json::array();
    for (const auto& e : tr.entries)
        entries.push_back({{"P", point_json(e.label)},
                           {"divisor", e.divisor},
                           {"ratio", complex_json(e.mean_ratio)},
                           {"cov", e.cov},
                           {"cov_squared", e.cov_squared}});
    rep.data("constancy") = entries;
    rep.holds("15 nonzero P compared", tr.entries.size() == 15);
    rep.below("max coefficient of variation of f_P / phi_P", tr.max_cov, 1e-4);
    rep.below("max coefficient of variation of the squared ratio", tr.max_cov_squared, 1e-4);

    const CurveModuli m = stage("normalize", [&] { return curve_moduli(f, tr.delta, rng); });
    json moduli = json::array();
    for (const auto& p : all_points(2, 2))
        moduli.push_back({{"P", point_json(p)},
                          {"square", complex_json(m.squared(p.index()))},
                          {"theta_constant_fourth_power", complex_json(m.expected(p.index()))}});
    rep.data("moduli") = moduli;
    rep.below("normal set residual of the curve family", m.normal_residual, 1e-7);
    rep.below("squared moduli against theta constants", m.max_error, cfg.tol);
}

// ---------------------------------------------------------------- spinor-suite

void spinor_suite(const Config& cfg, Report& rep) {
    std::mt19937_64 rng(cfg.seed);
    int pf_ok = 0, pf_total = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + 2 * (k % 4);
        const Mat<Rational> a = random_rational_skew(n, rng);
        const Rational pf = pfaffian(a);
        pf_ok += determinant(a) == pf * pf;
        ++pf_total;
    }
    rep.holds("det = Pf^2 on random rational skew matrices", pf_ok == pf_total, {{"passed", pf_ok}, {"total", pf_total}});

    Mat<Rational> four = Mat<Rational>::Zero(4, 4);
    const int upper[6] = {1, 2, 3, 4, 5, 6};
    for (int i = 0, k = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j, ++k) {
            four(i, j) = upper[k];
            four(j, i) = -upper[k];
        }
    rep.holds("Pf of the 4x4 example is 8", pfaffian(four) == 8, {{"value", rational_string(pfaffian(four))}});

    int sq_ok = 0, sq_total = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + k % 3;
        const auto inst = random_spinor_instance(n, rng, k % 5 == 0 ? 2 : 0);
        const auto s = spinor_square_check(inst.u, inst.v0, inst.space);
        sq_ok += !s.opposite_component && s.residual == 0.0;
        ++sq_total;
    }
    rep.holds("s = c v^2 on exact isotropic frames", sq_ok == sq_total, {{"passed", sq_ok}, {"total", sq_total}});

    const HyperellipticCurve c = stage("parse", [&] {
        return cfg.curve_file.empty() ? default_curve() : read_curve(cfg.curve_file);
    });
    json table = json::array();
    int ones = 0, zeros = 0, mismatches = 0;
    double worst = 0.0;
    stage("residue_pairing_space", [&] {
        for (const auto& t : theta_characteristics(c)) {
            const ResiduePairingSpace s = residue_pairing_space(c, t, rng);
            const XiCorank x = xi_corank(s);
            const int h0 = riemann_roch_basis(c, t.divisor).dimension();
            worst = std::max({worst, s.v0_defect, s.v1_defect});
            ones += x.corank == 1;
            zeros += x.corank == 0;
            mismatches += x.corank != h0;
            const QuadraticSpace<cplx> q(s.gram, 1e-8);
            const auto sq = spinor_square_check(Mat<cplx>(s.v1), Mat<cplx>(s.v0), q, 1e-7);
            table.push_back({{"E", t.label},
                             {"odd", t.odd},
                             {"h0", h0},
                             {"corank", x.corank},
                             {"v0_defect", s.v0_defect},
                             {"v1_defect", s.v1_defect},
                             {"opposite_component", sq.opposite_component}});
        }
        return 0;
    });
    rep.data("corank_table") = table;
    rep.below("residue space isotropy defect", worst, 1e-7);
    rep.holds("corank equals h0(E)", mismatches == 0, {{"ones", ones}, {"zeros", zeros}});
    rep.holds("6 coranks 1 and 10 coranks 0", ones == 6 && zeros == 10);
}

// ---------------------------------------------------------------- cohomology

void cohomology(const Config&, Report& rep) {
    json m = json::object();
    for (int g = 1; g <= 4; ++g) m[std::to_string(g)] = rational_string(chord_tangent_m(g));
    rep.data("chord_tangent_m") = m;
    rep.holds("m(2) = 3", chord_tangent_m(2) == 3, {{"value", rational_string(chord_tangent_m(2))}});

    const EmbeddingStats s = embedding_stats(2);
    rep.data("embedding") = {{"h0_6theta", s.h0_6theta},
                             {"h0_12theta", s.h0_12theta},
                             {"projective_dimension", s.projective_dimension},
                             {"hyperplanes", s.hyperplanes},
                             {"quadrics", s.quadrics}};
    rep.holds("embedding counts 125 / 90 / 522",
              s.projective_dimension == 125 && s.hyperplanes == 90 && s.quadrics == 522);

    json pull = json::array();
    bool all = true;
    for (auto [g, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {3, 4}}) {
        const PullbackWitness w = verify_pullback_theta(g, n);
        all = all && w.holds;
        pull.push_back({{"g", g}, {"n", n}, {"holds", w.holds}, {"difference", w.difference}});
    }
    rep.data("pullback_theta") = pull;
    rep.holds("pullback of theta to C^n", all);

    json diag = json::object();
    bool ok = true;
    for (int g = 2; g <= 4; ++g) {
        const Rational d = diagonal_self_intersection(g);
        diag[std::to_string(g)] = rational_string(d);
        ok = ok && d == -(2 * g - 2);
    }
    rep.data("diagonal_self_intersection") = diag;
    rep.holds("diagonal self-intersection is -(2g - 2)", ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Theta structures, Weil functions and Thomae-type checks"};
    app.require_subcommand(1);
    Config cfg;
    auto common = [&](CLI::App* s) {
        s->add_option("--N", cfg.n, "level")->check(CLI::Range(2, 12));
        s->add_option("--seed", cfg.seed, "PRNG seed");
        s->add_option("--tol", cfg.tol, "tolerance for the moduli comparison");
        s->add_option("--out", cfg.out, "write the report here instead of stdout");
    };
    auto* tm = app.add_subcommand("torus-moduli", "analytic Weil family on a period matrix");
    tm->add_option("--tau", cfg.tau_file, "JSON file {\"tau\": [[[re, im], ...], ...]}")->required();
    common(tm);
    auto* ct = app.add_subcommand("curve-thomae", "determinantal Weil functions against theta quotients");
    ct->add_option("--curve", cfg.curve_file, "JSON file with branch_points or coefficients")->required();
    common(ct);
    auto* ss = app.add_subcommand("spinor-suite", "Pfaffians, spinor squares and residue pairing spaces");
    ss->add_option("--curve", cfg.curve_file, "curve for the residue spaces (default y^2 = x^6 - 1)");
    common(ss);
    auto* co = app.add_subcommand("cohomology", "exact intersection numbers");
    common(co);
    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();

    Report rep(cfg);
    json out;
    int code = 0;
    try {
        if (cfg.command == "torus-moduli") torus_moduli(cfg, rep);
        if (cfg.command == "curve-thomae") curve_thomae(cfg, rep);
        if (cfg.command == "spinor-suite") spinor_suite(cfg, rep);
        if (cfg.command == "cohomology") cohomology(cfg, rep);
        out = rep.finish();
        code = rep.passed() ? 0 : 1;
    } catch (const StageError& e) {
        out = rep.finish();
        out["passed"] = false;
        out["error"] = {{"stage", e.stage}, {"message", e.what()}};
        code = 2;
    } catch (const std::exception& e) {
        out = rep.finish();
        out["passed"] = false;
        out["error"] = {{"stage", "run"}, {"message", e.what()}};
        code = 2;
    }
    const std::string text = out.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        f << text;
    }
    return code;
}
