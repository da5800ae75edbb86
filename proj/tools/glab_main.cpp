#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "glab/config.hpp"
#include "glab/experiments.hpp"
#include "glab/run_record.hpp"

namespace {

void print_summary(const glab::RunRecord& record) {
    std::printf("experiment: %s\n", record.experiment.c_str());
    std::printf("hash:       %s\n", record.content_hash().c_str());
    std::printf("wall:       %.2fs\n", record.wall_seconds);
    for (const auto& [name, ok] : record.assertions)
        std::printf("  [%s] %s\n", ok ? "pass" : "FAIL", name.c_str());
    for (const auto& [key, value] : record.notes)
        std::printf("  note %s = %s\n", key.c_str(), value.c_str());
}

int run_command(const std::string& config_path) {
    glab::Config config = glab::Config::parse_file(config_path);
    const glab::RunRecord record = glab::run_experiment(config);
    print_summary(record);
    return record.passed() ? 0 : 1;
}

int replay_command(const std::string& record_dir) {
    const glab::RunRecord original = glab::RunRecord::load(record_dir);
    // Re-run from the stored config and seed, dropping out_dir so the replay
    // never overwrites the original record; then compare content hashes.
    glab::Config clean;
    for (const auto& [k, v] : original.config.entries())
        if (k != "out_dir") clean.set(k, v);
    clean.set("seed", static_cast<double>(original.master_seed));
    clean.set("experiment", original.experiment);
    const glab::RunRecord fresh = glab::run_experiment(clean);
    const std::string h0 = original.content_hash();
    const std::string h1 = fresh.content_hash();
    std::printf("stored: %s\nreplay: %s\n", h0.c_str(), h1.c_str());
    if (h0 == h1) {
        std::printf("replay OK (bit-identical tables)\n");
        return 0;
    }
    std::printf("replay MISMATCH\n");
    return 1;
}

int report_command(const std::string& record_dir, bool csv) {
    const glab::RunRecord record = glab::RunRecord::load(record_dir);
    if (csv) {
        for (const auto& [name, table] : record.tables) {
            std::printf("# table %s\n", name.c_str());
            std::fputs(table.to_csv().c_str(), stdout);
        }
    } else {
        print_summary(record);
    }
    return record.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-range exclusion / Cole-Hopf simulation lab"};
    app.require_subcommand(1);

    std::string config_path, record_dir;
    bool csv = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "key = value config file")->required();

    auto* replay = app.add_subcommand("replay", "re-run a stored record and compare hashes");
    replay->add_option("record", record_dir, "run directory")->required();

    auto* report = app.add_subcommand("report", "print a stored record");
    report->add_option("record", record_dir, "run directory")->required();
    report->add_flag("--csv", csv, "dump tables as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path);
        if (replay->parsed()) return replay_command(record_dir);
        if (report->parsed()) return report_command(record_dir, csv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
