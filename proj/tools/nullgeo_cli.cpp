// Command-line front end: config ingestion, check orchestration, reports and
// plot data. Exit codes: 0 all pass, 1 any fail, 2 config error, 3 internal.

#include "nullgeo/catalog.hpp"
#include "nullgeo/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace nullgeo;

namespace {

struct Globals {
    std::optional<double> tol_exact, tol_fd;
    std::optional<std::uint64_t> seed;
    std::string grid;
    bool strict = true;
    std::string out;
};

RunConfig load(const std::string& source, const Globals& g) {
    const std::string prefix = "catalog:";
    RunConfig cfg = source.rfind(prefix, 0) == 0 ? entry(source.substr(prefix.size())) : load_config(source, g.strict);
    if (g.tol_exact) cfg.tolerances.exact = *g.tol_exact;
    if (g.tol_fd) cfg.tolerances.fd = *g.tol_fd;
    if (g.seed) cfg.seed = *g.seed;
    if (!g.grid.empty()) {
        std::vector<int> counts;
        std::stringstream ss(g.grid);
        std::string part;
        while (std::getline(ss, part, 'x')) {
            try {
                std::size_t used = 0;
                counts.push_back(std::stoi(part, &used));
                if (used != part.size() || counts.back() < 0) throw std::invalid_argument(part);
            } catch (const std::logic_error&) {
                throw ConfigError("--grid: expected counts like 16x16, got '" + g.grid + "'");
            }
        }
        if (counts.size() != cfg.immersion.parameters.size())
            throw ConfigError("--grid: expected " + std::to_string(cfg.immersion.parameters.size()) + " counts");
        cfg.immersion.grid = counts;
    }
    return cfg;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot write");
    out << text;
}

int finish(const RunResult& r, const Globals& g) {
    emit(report_json(r), g.out);
    for (const auto& o : r.outcomes)
        std::cerr << verdict_name(o.report.verdict) << "  " << o.label()
                  << (o.report.note.empty() ? "" : "  (" + o.report.note + ")") << "\n";
    return r.any_fail() ? 1 : 0;
}

RunResult run_requests(const Session& s, const std::vector<CheckRequest>& qs) {
    RunResult r;
    r.name = s.config().name;
    r.config_hash = config_hash(s.config());
    r.seed = s.config().seed;
    for (const auto& q : qs) r.outcomes.push_back(run_check(s, q));
    return r;
}

CheckRequest request(const std::string& check, const std::string& screen, const std::string& field) {
    CheckRequest q;
    q.check = check;
    q.screen = screen;
    q.field = field;
    return q;
}

std::string default_field(const RunConfig& cfg, const std::string& given) {
    if (!given.empty()) return given;
    if (cfg.fields.empty()) throw ConfigError("config defines no fields; pass --field");
    return cfg.fields.front().first;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) out.push_back(part);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screen geometry of null hypersurfaces: frames, shape operators and theorem checks."};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol-exact", g.tol_exact, "tolerance for jet-only quantities");
    app.add_option("--tol-fd", g.tol_fd, "tolerance for finite-difference quantities");
    app.add_option("--seed", g.seed, "seed for random gauges and curvature triples");
    app.add_option("--grid", g.grid, "grid counts per parameter, e.g. 16x16");
    app.add_flag("--strict,!--no-strict", g.strict, "reject unknown config keys (default on)");
    app.add_option("--out", g.out, "write the report (or dump) here instead of stdout");

    std::string config, screen, field, lemma, checks, name, csv, columns;

    auto* validate = app.add_subcommand("validate", "frame residuals on every grid point");
    validate->add_option("config", config, "config path or catalog:NAME")->required();
    validate->add_option("--screen", screen, "screen name (default: all)");

    auto* shape = app.add_subcommand("shape", "shape operator invariants");
    shape->add_option("config", config)->required();
    shape->add_option("--screen", screen);

    auto* angle = app.add_subcommand("angle", "constant-angle test and gauge invariance");
    angle->add_option("config", config)->required();
    angle->add_option("--field", field, "vector field name (default: first)");
    angle->add_option("--screen", screen);

    auto* verify = app.add_subcommand("verify", "one lemma or theorem check");
    verify->add_option("config", config)->required();
    verify->add_option("--lemma", lemma)
        ->required()
        ->check(CLI::IsMember({"components", "codazzi", "eqgrads", "cpd", "principal", "qc-screen", "flat-screen",
                               "cmc", "nonmetric"}));
    verify->add_option("--field", field);
    verify->add_option("--screen", screen);

    auto* runc = app.add_subcommand("run", "run the checks listed in the config");
    runc->add_option("config", config)->required();
    runc->add_option("--checks", checks, "comma-separated check names (default: all)");

    auto* catalog = app.add_subcommand("catalog", "shipped examples");
    catalog->require_subcommand(1);
    catalog->fallthrough();
    catalog->add_subcommand("list", "list entry names");
    auto* dump = catalog->add_subcommand("dump", "print an entry as a config");
    dump->add_option("name", name)->required();

    auto* exportc = app.add_subcommand("export", "CSV of frames and per-check series");
    exportc->add_option("config", config)->required();
    exportc->add_option("--csv", csv, "output CSV path")->required();
    exportc->add_option("--screen", screen);
    exportc->add_option("--columns", columns, "comma-separated label.series columns (default: all)");
    exportc->add_option("--checks", checks, "comma-separated check names to run (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (catalog->parsed()) {
            if (dump->parsed()) {
                emit(dump_config(entry(name)), g.out);
            } else {
                for (const auto& n : catalog_names()) std::cout << n << "  " << entry(n).description << "\n";
            }
            return 0;
        }
        const Session session(load(config, g));
        const RunConfig& cfg = session.config();
        if (validate->parsed() || shape->parsed()) {
            const std::string check = validate->parsed() ? "validate" : "shape";
            std::vector<CheckRequest> qs;
            if (!screen.empty()) qs.push_back(request(check, screen, ""));
            else
                for (const auto& [n, s] : cfg.screens) qs.push_back(request(check, n, ""));
            return finish(run_requests(session, qs), g);
        }
        if (angle->parsed()) {
            const std::string f = default_field(cfg, field);
            return finish(run_requests(session, {request("angle", screen, f), request("gauge", screen, f)}), g);
        }
        if (verify->parsed()) {
            const bool fieldless = lemma == "codazzi" || lemma == "nonmetric";
            return finish(run_requests(session, {request(lemma, screen, fieldless ? "" : default_field(cfg, field))}),
                          g);
        }
        if (runc->parsed()) return finish(run(session, split(checks)), g);
        if (exportc->parsed()) {
            const RunResult r = run(session, split(checks));
            export_csv(session, r, screen, split(columns), csv);
            if (!g.out.empty()) emit(report_json(r), g.out);
            return r.any_fail() ? 1 : 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
