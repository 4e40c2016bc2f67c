#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace gbe::harness {

// One experiment run description. alpha and energy may hold several values;
// run_experiment expands the product into one result table per combination
// (dos-table treats the energy grid as table rows instead).
struct ExperimentConfig {
    std::string experiment;

    long long n = 0;                 // 0 = experiment default
    std::vector<double> alpha{1.0};
    std::vector<double> energy{0.0};
    double emin = -4.0, emax = 4.0, estep = 0.25;  // dos-table grid
    double sigma = 0.0, tau = 1.0;   // zeta = sigma + i tau
    long long replicas = 0;          // 0 = experiment default
    std::uint64_t seed = 2718;
    double window = 10.0;
    std::string f = "x2";
    long long grid_size = 11;        // sigma2-identity nodes
    long long lhs_n = 200, lhs_replicas = 20000;
    double bin = 0.0;                // local-law histogram bin; 0 = 0.5/n
    double z_re = 0.5, z_im = 0.01;  // wegner-minami resolvent point
    long long block = 64;            // minami block length
    long long block_samples = 100000;
    double interval = 1.0;           // minami |I|
    double s_exponent = 0.2;         // green-decay fractional moment
    long long max_distance = 100;
    double decay_z_re = 0.0, decay_z_im = 1e-3;  // green-decay resolvent point
    long long trunc_n = 40'000'000;  // dos-table truncation size
    double eta = 1e-3;
    std::string out = "out";
    unsigned workers = 0;            // 0 = GBELAB_WORKERS or hardware
};

extern const std::vector<std::string> kExperiments;

// Parses and validates a JSON config document. Unknown experiment ids,
// missing fields, or type mismatches raise config_error naming the field.
ExperimentConfig parse_config(const std::string& text);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig from_json(const nlohmann::json& j);

struct ResultTable {
    std::string name;  // file stem, derived from experiment and swept values
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json metadata;  // config echo, ses, verdicts; timestamps live here only

    void add_row(std::initializer_list<double> values);
};

// Runs the experiment (expanding alpha/energy sweeps) and, when write_files
// is true, writes one CSV plus one JSON sidecar per table under cfg.out.
std::vector<ResultTable> run_experiment(const ExperimentConfig& cfg, bool write_files = true);

// CSV bytes: header row, '\n' endings, '.' decimal, 17 significant digits,
// no quoting. Fully determined by the table contents.
std::string to_csv(const ResultTable& table);

void write_outputs(const ResultTable& table, const std::string& out_dir);

// Pass/fail summary over the verdicts embedded in table metadata. Returns
// exit status 0 when everything passed, 1 otherwise.
struct Report {
    std::string text;
    int exit_code = 0;
};
Report emit_report(const std::vector<ResultTable>& tables);

} // namespace gbe::harness
