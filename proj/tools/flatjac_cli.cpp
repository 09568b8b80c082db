// Command-line front end: period matrices, conformal reduction and the
// verification suites. Exit codes: 0 success, 2 input error, 3 failed
// verification or a result outside the Siegel upper half space.

#include <flatjac/io.hpp>
#include <flatjac/flatjac.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_failed = 3;

using flatjac::io::json;

std::string format_double(double v)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

void print_records_csv(const std::vector<flatjac::CheckRecord>& records)
{
    std::cout << "suite,check,trial,value,pass\n";
    for (const auto& r : records)
        std::cout << r.suite << ',' << r.check << ',' << r.trial << ',' << format_double(r.value) << ','
                  << (r.pass ? "true" : "false") << '\n';
}

void print_records_json(const std::string& suite, const flatjac::RunConfig& config,
    const std::vector<flatjac::CheckRecord>& records)
{
    json checks = json::array();
    for (const auto& r : records)
        checks.push_back({{"suite", r.suite}, {"check", r.check}, {"trial", r.trial}, {"value", r.value},
            {"pass", r.pass}});
    const json out = {{"suite", suite},
        {"config", {{"n", config.n}, {"seed", config.seed}, {"tol", config.tol}, {"trials", config.trials}}},
        {"passed", flatjac::all_passed(records)}, {"failures", std::count_if(records.begin(), records.end(),
                                                              [](const auto& r) { return !r.pass; })},
        {"checks", checks}};
    std::cout << out.dump(2) << '\n';
}

int cmd_period(const std::string& path, double tol)
{
    const auto frame = flatjac::io::frame_from_json(flatjac::io::read_file(path));
    flatjac::require_odd_middle_degree(frame.n());
    const flatjac::ComplexMatrix Z = flatjac::period_matrix_unchecked(frame, flatjac::build_middle_table(frame.n()));
    const auto membership = flatjac::siegel_membership(Z, tol);
    json out = flatjac::io::period_to_json(Z);
    out["siegel"] = flatjac::io::membership_to_json(membership);
    std::cout << out.dump(2) << '\n';
    return membership.ok ? exit_ok : exit_failed;
}

int cmd_reduce(const std::string& path)
{
    const auto P = flatjac::io::metric_from_json(flatjac::io::read_file(path));
    std::cout << flatjac::io::reduction_to_json(flatjac::reduce_conformal(P)).dump(2) << '\n';
    return exit_ok;
}

int cmd_verify(const std::string& suite, const flatjac::RunConfig& config, const std::string& format)
{
    const auto records = flatjac::run_suite(suite, config);
    if (format == "csv") print_records_csv(records);
    else print_records_json(suite, config, records);
    return flatjac::all_passed(records) ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Period matrices of flat tori and their verification suites"};
    flatjac::RunConfig config;
    std::string format = "json";
    bool dump_basis = false;
    app.add_option("--n", config.n, "Torus dimension n = 2m")->capture_default_str();
    app.add_option("--seed", config.seed, "Master seed for the random suites")->capture_default_str();
    app.add_option("--tol", config.tol, "Generic residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--trials", config.trials, "Trials per property")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format of verify")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_flag("--dump-basis", dump_basis, "Print the canonical degree-n/2 basis for --n");

    std::string frame_path;
    auto* period = app.add_subcommand("period", "Period matrix of a frame {n, L}");
    period->add_option("frame", frame_path, "Frame JSON file")->required();

    std::string metric_path;
    auto* reduce = app.add_subcommand("reduce", "Conformal reduction of a metric {n, P}");
    reduce->add_option("metric", metric_path, "Metric JSON file")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", suite, "lemmas | theoremA | kaehler | bundle | appendix | all")->required();

    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (dump_basis) {
            flatjac::require(config.n >= 2 && config.n % 2 == 0, flatjac::ErrorKind::invalid_arguments, "--n must be even");
            std::cout << flatjac::io::index_table_to_json(flatjac::build_middle_table(config.n)).dump(2) << '\n';
            if (app.get_subcommands().empty()) return exit_ok;
        }
        if (period->parsed()) return cmd_period(frame_path, config.tol);
        if (reduce->parsed()) return cmd_reduce(metric_path);
        if (verify->parsed()) {
            flatjac::require(config.n >= 2 && config.n % 2 == 0, flatjac::ErrorKind::invalid_arguments, "--n must be even");
            return cmd_verify(suite, config, format);
        }
        if (!dump_basis) {
            std::cerr << app.help();
            return exit_input;
        }
        return exit_ok;
    } catch (const flatjac::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == flatjac::ErrorKind::numerical_breakdown ? exit_failed : exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
}
