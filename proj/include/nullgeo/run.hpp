#pragma once

#include "nullgeo/config.hpp"

namespace nullgeo {

/// Objects built once from a config and shared by its checks.
class Session {
public:
    explicit Session(RunConfig config);

    const RunConfig& config() const { return config_; }
    const AmbientManifold& ambient() const { return *ambient_; }
    std::shared_ptr<const NullImmersion> immersion() const { return immersion_; }

    /// Frame field of the named screen; the empty name selects the first.
    const NullFrameField& screen(const std::string& name) const;
    VectorField field(const std::string& name) const;
    std::vector<Vec> points() const { return immersion_->grid_points(); }

private:
    RunConfig config_;
    std::shared_ptr<const AmbientManifold> ambient_;
    std::shared_ptr<const NullImmersion> immersion_;
    std::vector<std::pair<std::string, NullFrameField>> screens_;
};

struct CheckOutcome {
    CheckRequest request;
    Report report;
    std::string error;  // set when the check raised
    bool expectation_met = true;

    /// check@screen/field, the key used for export columns.
    std::string label() const;
};

struct RunResult {
    std::string name;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> outcomes;

    bool any_fail() const;
    bool expectations_met() const;
};

/// Runs one request; errors are captured in the outcome.
CheckOutcome run_check(const Session& session, const CheckRequest& request);

/// Runs the config's checks, or only those whose name is in `only`.
RunResult run(const Session& session, const std::vector<std::string>& only = {});
RunResult run(const RunConfig& config, const std::vector<std::string>& only = {});

/// Report body: verdicts, per-sample arrays, summary statistics and
/// provenance. Identical inputs give identical bytes.
std::string report_json(const RunResult& result);

/// CSV of grid points, frames and the selected per-check series. Columns are
/// "label.series"; empty `columns` selects every series of checks run on the
/// screen. Writes `path` and the column contract to `path + ".schema.json"`.
void export_csv(const Session& session, const RunResult& result, const std::string& screen,
                const std::vector<std::string>& columns, const std::string& path);

inline constexpr int kCsvContractVersion = 1;

}  // namespace nullgeo
