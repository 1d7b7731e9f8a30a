// Acceptance run: one PASS/FAIL line per criterion over the shipped catalog.
// `--expect-fail 6,11` exits 0 when exactly those criteria fail, so known
// unattainable criteria stay visible without breaking the suite.

#include "nullgeo/catalog.hpp"
#include "nullgeo/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using namespace nullgeo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

struct Result {
    bool ok = true;
    std::string detail;

    void need(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void info(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

Report check(const Session& s, const std::string& name, const std::string& screen, const std::string& field = "") {
    CheckRequest q;
    q.check = name;
    q.screen = screen;
    q.field = field;
    const CheckOutcome o = run_check(s, q);
    if (!o.error.empty()) throw Error(o.label() + ": " + o.error);
    return o.report;
}

/// Catalog requests named `name`, paired with their session.
template <class F>
void each_request(const std::string& name, F&& f) {
    for (const auto& n : catalog_names()) {
        const RunConfig cfg = entry(n);
        bool any = false;
        for (const auto& q : cfg.checks) any = any || q.check == name;
        if (!any) continue;
        const Session s(cfg);
        for (const auto& q : cfg.checks)
            if (q.check == name) f(n, s, q);
    }
}

double max_over(const Report& r, std::initializer_list<const char*> names) {
    double m = 0.0;
    for (const char* n : names) m = std::max(m, r.max_of(n));
    return m;
}

std::string tag(const std::string& entry, const CheckRequest& q) {
    return entry + ":" + q.screen + (q.field.empty() ? "" : "/" + q.field);
}

Result frame_validity() {
    Result res;
    const auto t0 = Clock::now();
    const Session s(entry("light_cone_2d"));
    double worst = 0.0;
    for (const auto& [name, sc] : s.config().screens) {
        const Report r = check(s, "validate", name);
        worst = std::max(worst, max_over(r, {"xi_null", "nt_null", "pairing", "nt_screen", "xi_screen",
                                             "screen_orthonormal", "tangency"}));
        res.need(r.excluded.empty() && r.points.size() == 256, name + " did not cover the 16x16 grid");
    }
    const double dt = seconds_since(t0);
    res.need(worst <= 1e-9, "residual " + sci(worst));
    res.need(dt <= 1.0, "took " + sci(dt) + " s");
    res.info("max residual " + sci(worst) + ", " + sci(dt) + " s");
    return res;
}

Result grw_pair() {
    Result res;
    const Session s(entry("grw_transnormal_graph"));
    const Report r = check(s, "sqc_grw", "rigging_dt");
    const double rel = max_over(r, {"phi_rel_error", "psi_rel_error"});
    const double sqc = r.max_of("sqc_residual");
    res.need(r.scalar("non_unique_samples") == 0.0, "fit not unique at some samples");
    res.need(rel <= 1e-5, "relative error " + sci(rel));
    res.need(sqc <= 1e-5, "sqc residual " + sci(sqc));
    res.info("rel error " + sci(rel) + ", sqc residual " + sci(sqc));
    return res;
}

Result cc_screen_theorem() {
    Result res;
    for (const auto& [n, field] : {std::pair<std::string, std::string>{"minkowski_null_hyperplane", "e0"},
                                   {"grw_transnormal_graph", "Z"}}) {
        const Session s(entry(n));
        const Report r = check(s, "qc-screen", "", field);
        const double qc = r.max_of("qc_residual"), tau = r.max_of("tau_screen");
        res.need(r.verdict == Verdict::pass, n + " " + verdict_name(r.verdict));
        res.need(qc <= 1e-5 && tau <= 1e-5, n + " qc " + sci(qc) + " tau " + sci(tau));
        res.need(r.excluded.empty(), n + " skipped samples");
        res.info(n + " qc " + sci(qc) + " tau " + sci(tau));
    }
    return res;
}

Result components() {
    Result res;
    double worst = 0.0;
    std::set<std::string> seen;
    each_request("components", [&](const std::string& n, const Session& s, const CheckRequest& q) {
        const Report cc = check(s, "cc", "", q.field);
        if (cc.verdict != Verdict::pass) return;
        const Report r = check(s, "components", q.screen, q.field);
        const double m = max_over(r, {"a", "b", "c"});
        worst = std::max(worst, m);
        res.need(m <= 1e-5 && !r.points.empty(), tag(n, q) + " " + sci(m));
        seen.insert(n);
    });
    res.need(seen.size() == catalog_names().size(), "entries without a CC components check");
    res.info(std::to_string(seen.size()) + " entries, max " + sci(worst));
    return res;
}

Result constant_angle() {
    Result res;
    const Session s(entry("light_cone_2d"));
    double spread = 0.0, dev = 0.0;
    for (const auto& [name, sc] : s.config().screens) {
        spread = std::max(spread, check(s, "angle", name, "e0").scalar("q_spread"));
        dev = std::max(dev, check(s, "gauge", name, "e0").max_of("q_deviation"));
    }
    res.need(spread <= 1e-9, "q spread " + sci(spread));
    res.need(dev <= 1e-9, "gauge deviation " + sci(dev));
    int checks = 0;
    each_request("angle", [&](const std::string& n, const Session& e, const CheckRequest& q) {
        const Report r = check(e, "angle", q.screen, q.field);
        res.need(r.scalar("criteria_agree") == 1.0, tag(n, q) + " criteria disagree");
        ++checks;
    });
    res.info("spread " + sci(spread) + ", gauge " + sci(dev) + ", criteria agree on " + std::to_string(checks) +
             " cases");
    return res;
}

Result principal_direction() {
    Result res;
    double eig = 0.0, printed = 0.0, derived = 0.0, zperp = 0.0;
    each_request("principal", [&](const std::string& n, const Session& s, const CheckRequest& q) {
        const Report r = check(s, "principal", q.screen, q.field);
        if (r.verdict == Verdict::inapplicable) return;
        const double e = r.max_of("eigen_residual"), p = r.max_of("printed_residual");
        eig = std::max(eig, e);
        printed = std::max(printed, p);
        derived = std::max(derived, r.max_of("derived_residual"));
        res.need(e <= 1e-5, tag(n, q) + " eigen " + sci(e));
        res.need(p <= 1e-5, tag(n, q) + " lambda " + sci(p));
        if (r.max_of("phi") == 0.0) {
            const double a = r.max_of("AZperp_norm");
            zperp = std::max(zperp, a);
            res.need(a <= 1e-6, tag(n, q) + " A_Zperp Z* " + sci(a));
        }
    });
    res.info("eigen " + sci(eig) + ", printed lambda " + sci(printed) + ", opposite-sign lambda " + sci(derived) +
             ", parallel " + sci(zperp));
    return res;
}

Result geodesic_direction() {
    Result res;
    int cases = 0;
    each_request("geodesic", [&](const std::string& n, const Session& s, const CheckRequest& q) {
        const Report cpd = check(s, "cpd", q.screen, q.field);
        if (cpd.verdict != Verdict::pass) return;
        const Report r = check(s, "geodesic", q.screen, q.field);
        const double g = r.max_of("geodesic"), l = r.max_of("geodesic_lambda");
        res.need(g <= 1e-5 && l <= 1e-5, tag(n, q) + " " + sci(g) + " " + sci(l));
        ++cases;
    });
    res.need(cases > 0, "no case where the principal-direction test passes");
    res.info(std::to_string(cases) + " cases");
    return res;
}

Result codazzi() {
    Result res;
    for (const auto& [n, tol] : {std::pair<std::string, double>{"light_cone_2d", 1e-4},
                                 {"de_sitter_null_cmc", 1e-4},
                                 {"minkowski_null_hyperplane", 1e-9},
                                 {"minkowski_null_hyperplane_4d", 1e-9}}) {
        const Session s(entry(n));
        const double m = check(s, "codazzi", "").max_of("residual");
        res.need(m <= tol, n + " " + sci(m));
        res.info(n + " " + sci(m));
    }
    return res;
}

Result spaceform() {
    Result res;
    for (const auto& [n, tol] : {std::pair<std::string, double>{"minkowski_null_hyperplane", 1e-9},
                                 {"grw_transnormal_graph", 1e-6}}) {
        const Session s(entry(n));
        const Report r = check(s, "spaceform", "");
        const double m = r.max_of("residual");
        res.need(r.scalar("evaluations") == 200.0, n + " used " + sci(r.scalar("evaluations")) + " triples");
        res.need(m <= tol, n + " " + sci(m));
        res.info(n + " c=" + sci(r.scalar("c")) + " " + sci(m));
    }
    return res;
}

Result flat_screen() {
    Result res;
    const Session s(entry("flat_screen_4d"));
    const Report r = check(s, "flat-screen", "rotating", "e0");
    const double m = max_over(r, {"nabla_T_T", "nabla_W_T", "nabla_T_W", "nabla_W_W"});
    res.need(r.verdict == Verdict::pass, std::string("verdict ") + verdict_name(r.verdict) + " " + r.note);
    res.need(m <= 1e-5, "residual " + sci(m));
    res.info("max residual " + sci(m));
    return res;
}

Result cmc() {
    Result res;
    const Session s(entry("de_sitter_null_cmc"));
    const Report r = check(s, "cmc", "rigging_dt", "Z");
    res.need(r.verdict == Verdict::pass, std::string("verdict ") + verdict_name(r.verdict) +
                                             (r.note.empty() ? "" : " (" + r.note + ")"));
    if (r.verdict == Verdict::pass) {
        const double m = max_over(r, {"W_k_star", "cond1", "cond2", "homogeneity"});
        res.need(m <= 1e-5, "residual " + sci(m));
    }
    res.info("H max " + sci(r.scalar("H_max")));
    return res;
}

std::string suite_reports() {
    std::string out;
    for (const auto& n : catalog_names()) out += report_json(run(entry(n)));
    return out;
}

Result determinism() {
    Result res;
    auto t0 = Clock::now();
    const std::string a = suite_reports();
    const double first = seconds_since(t0);
    t0 = Clock::now();
    const std::string b = suite_reports();
    const double second = seconds_since(t0);
    res.need(a == b, "report bodies differ");
    res.need(std::max(first, second) <= 60.0, "suite took " + sci(std::max(first, second)) + " s");
    res.info(std::to_string(a.size()) + " bytes, " + sci(first) + " s and " + sci(second) + " s");
    return res;
}

std::set<int> parse_list(const char* s) {
    std::set<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.insert(std::stoi(part));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::optional<std::set<int>> expected_fail;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) expected_fail = parse_list(argv[++i]);

    const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"frame validity", frame_validity},
        {"quasi-conformal GRW pair", grw_pair},
        {"closed conformal screen theorem", cc_screen_theorem},
        {"component identities", components},
        {"constant angle and gauge invariance", constant_angle},
        {"canonical principal direction", principal_direction},
        {"geodesic direction", geodesic_direction},
        {"Codazzi", codazzi},
        {"spaceform identities", spaceform},
        {"flat screen", flat_screen},
        {"CMC", cmc},
        {"determinism and runtime", determinism},
    };
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.ok = false;
            r.detail = std::string("error: ") + e.what();
        }
        if (!r.ok) failed.insert(id);
        std::printf("%s %2d  %s: %s\n", r.ok ? "PASS" : "FAIL", id, criteria[i].first.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
    if (expected_fail) return failed == *expected_fail ? 0 : 1;
    return failed.empty() ? 0 : 1;
}
