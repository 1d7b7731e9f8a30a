#include <doctest.h>

#include "nullgeo/catalog.hpp"
#include "nullgeo/run.hpp"

using namespace nullgeo;

namespace {

Mat projector(const NullFrame& f) {
    const Mat& S = f.screen;
    return S * (S.transpose() * f.g * S).inverse() * S.transpose() * f.g;
}

}  // namespace

TEST_CASE("every catalog entry meets its recorded verdicts") {
    for (const auto& n : catalog_names()) {
        CAPTURE(n);
        const RunResult r = run(entry(n));
        CHECK(!r.outcomes.empty());
        for (const auto& o : r.outcomes) {
            CAPTURE(o.label());
            CAPTURE(o.report.note);
            CHECK(o.error.empty());
            CHECK(o.expectation_met);
        }
    }
}

TEST_CASE("every catalog screen validates") {
    for (const auto& n : catalog_names()) {
        const Session s(entry(n));
        for (const auto& [name, sc] : s.config().screens) {
            CAPTURE(n);
            CAPTURE(name);
            CheckRequest q;
            q.check = "validate";
            q.screen = name;
            CHECK(run_check(s, q).report.verdict == Verdict::pass);
        }
    }
}

TEST_CASE("shipped transnormal functions") {
    for (const char* w : {"1", "id", "cosh", "cos"}) {
        CAPTURE(w);
        CHECK(transnormal_residual(transnormal_defaults(w)) <= 1e-9);
    }
    CHECK_THROWS_AS(transnormal_defaults("exp"), ConfigError);
}

TEST_CASE("timelike and null riggings of the cone give the same frame") {
    const Session s(entry("light_cone_2d"));
    const NullFrameField& a = s.screen("rigging_e0");
    const NullFrameField& b = s.screen("null_rigging_0.5");
    for (const auto& u : s.points()) {
        const NullFrame fa = a.at(u), fb = b.at(u);
        CHECK((fa.nt - fb.nt).norm() <= 1e-12);
        CHECK((projector(fa) - projector(fb)).norm() <= 1e-10);
    }
}

TEST_CASE("unknown entries are config errors") {
    CHECK_THROWS_AS(entry("no_such_entry"), ConfigError);
}
