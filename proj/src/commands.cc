// Copyright 2026 The qhedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qhedge/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhedge/analysis.h"
#include "qhedge/io.h"
#include "qhedge/sdp.h"

namespace qhedge::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kRandomSamples = 200;

/// Carries an exit code out of a command body.
struct CommandError : std::runtime_error {
    CommandError(int code, const std::string &what) : std::runtime_error(what), code(code) {
    }
    int code;
};

struct GlobalOptions {
    double tol = 1e-8;
    int max_iter = 200;
    std::uint64_t seed = 0;
    bool json = false;
};

class Report {
   public:
    Report(const std::vector<std::string> &args) {
        doc_["command"] = "";
        doc_["args"] = args;
        doc_["inputs"] = ordered_json::array();
        doc_["values"] = ordered_json::object();
    }

    void set_command(const std::string &name) { doc_["command"] = name; }
    ordered_json &values() { return doc_["values"]; }
    ordered_json &section(const char *name) {
        if (!doc_.contains(name)) {
            doc_[name] = ordered_json::object();
        }
        return doc_[name];
    }

    void add_input(const std::string &path, const std::string &bytes) {
        doc_["inputs"].push_back({{"path", path}, {"fnv1a64", io::fnv1a64(bytes)}});
    }

    void finish(int code, const std::string &error, double seconds) {
        doc_["exit_code"] = code;
        doc_["status"] = code == kOk ? "ok" : "error";
        if (!error.empty()) {
            doc_["error"] = error;
        }
        doc_["wall_time_s"] = seconds;
    }

    void emit(std::ostream &out, bool as_json) const {
        if (as_json) {
            print_json(out, doc_, 0);
            out << "\n";
            return;
        }
        print_human(out, "", doc_);
    }

   private:
    /// Reals keep trailing zeros so every one of them shows its full precision.
    static std::string format_real(double x, int digits) {
        if (!std::isfinite(x)) {
            return "null";
        }
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%#.*g", digits, x);
        return buf;
    }

    static void print_json(std::ostream &out, const ordered_json &v, int indent) {
        const std::string pad(indent + 2, ' ');
        if (v.is_object() && !v.empty()) {
            out << "{\n";
            bool first = true;
            for (const auto &[key, child] : v.items()) {
                out << (first ? "" : ",\n") << pad << ordered_json(key).dump() << ": ";
                print_json(out, child, indent + 2);
                first = false;
            }
            out << "\n" << std::string(indent, ' ') << "}";
        } else if (v.is_array() && !v.empty()) {
            out << "[\n";
            for (std::size_t k = 0; k < v.size(); k++) {
                out << (k ? ",\n" : "") << pad;
                print_json(out, v[k], indent + 2);
            }
            out << "\n" << std::string(indent, ' ') << "]";
        } else if (v.is_number_float()) {
            out << format_real(v.get<double>(), 17);
        } else {
            out << v.dump();
        }
    }

    static void print_human(std::ostream &out, const std::string &prefix, const ordered_json &v) {
        if (v.is_object()) {
            for (const auto &[key, child] : v.items()) {
                print_human(out, prefix.empty() ? key : prefix + "." + key, child);
            }
            return;
        }
        out << prefix << ": ";
        if (v.is_number_float()) {
            out << format_real(v.get<double>(), 15);
        } else if (v.is_string()) {
            out << v.get<std::string>();
        } else {
            out << v.dump();
        }
        out << "\n";
    }

    ordered_json doc_;
};

/// Reads a test file; a parse failure exits 2 and an invalid test exits 3.
InteractiveMeasurement load_test(const std::string &path, Report &report) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception &e) {
        throw CommandError(kParseError, e.what());
    }
    report.add_input(path, text);
    InteractiveMeasurement im;
    try {
        im = io::parse_test(text);
    } catch (const std::exception &e) {
        throw CommandError(kParseError, path + ": " + e.what());
    }
    auto diag = validate_im(im, 1e-6);
    if (!diag.valid) {
        std::string msg = path + ": not a valid test";
        for (const auto &p : diag.problems) {
            msg += "; " + p;
        }
        throw CommandError(kValidationError, msg);
    }
    return im;
}

ChoiOperator load_channel(const std::string &path, Report &report) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception &e) {
        throw CommandError(kParseError, e.what());
    }
    report.add_input(path, text);
    try {
        return io::parse_channel(text);
    } catch (const DimensionError &e) {
        throw CommandError(kValidationError, path + ": " + e.what());
    } catch (const std::exception &e) {
        throw CommandError(kParseError, path + ": " + e.what());
    }
}

ordered_json solution_json(const SdpSolution &s) {
    return {
        {"primal_value", s.primal_value},
        {"dual_value", s.dual_value},
        {"raw_dual_value", s.raw_dual_value},
        {"dual_shift", s.dual_shift},
        {"gap", s.gap},
        {"primal_residual", s.primal_residual},
        {"dual_residual", s.dual_residual},
        {"iterations", s.iterations},
        {"converged", s.converged},
    };
}

int cmd_solve(const GlobalOptions &g, const std::string &file, const std::string &outcome,
              const std::string &sense_text, Report &report) {
    InteractiveMeasurement im = load_test(file, report);
    if (!im.outcomes.contains(outcome)) {
        throw CommandError(kParseError, "outcome '" + outcome + "' is not in " + file);
    }
    PartialTraceSdp p{effective_operator(im, outcome), im.dims.x, im.dims.y, parse_sense(sense_text)};
    SdpSolution s = solve(p, {g.tol, g.max_iter});
    CertificateReport cert = certify(p, s, {1e-8, std::max(1e-7, g.tol), g.tol + 1e-12});
    double sampled = random_strategy_bound(p, kRandomSamples, g.seed);
    bool sampled_ok = p.sense == Sense::Max ? sampled <= s.dual_value + g.tol : sampled >= s.dual_value - g.tol;

    auto &v = report.values();
    v["outcome"] = outcome;
    v["sense"] = to_string(p.sense);
    v["value"] = s.primal_value;
    v.update(solution_json(s));
    v["certified"] = cert.passed;
    v["certificate_failures"] = cert.failures;
    v["random_strategy_bound"] = sampled;
    v["random_strategy_samples"] = kRandomSamples;
    v["random_strategy_consistent"] = sampled_ok;

    if (!s.converged) {
        throw CommandError(kNotConverged, "solver did not converge within " + std::to_string(g.max_iter) +
                                              " iterations");
    }
    if (!cert.passed || !sampled_ok) {
        throw CommandError(kNotConverged, "solution failed certification");
    }
    return kOk;
}

int cmd_product(const std::string &file1, const std::string &file2, const std::string &out_path, Report &report) {
    InteractiveMeasurement im1 = load_test(file1, report);
    InteractiveMeasurement im2 = load_test(file2, report);
    std::size_t dx = im1.dims.x * im2.dims.x;
    std::size_t dy = im1.dims.y * im2.dims.y;
    auto &v = report.values();
    v["dim_x"] = dx;
    v["dim_y"] = dy;
    v["dim_z"] = im1.dims.z * im2.dims.z;
    v["choi_dimension"] = dx * dy;
    if (dx * dy > kDimensionCap) {
        throw CommandError(kDimensionTooLarge, "composite Choi dimension " + std::to_string(dx * dy) + " exceeds the cap of " +
                                              std::to_string(kDimensionCap));
    }
    InteractiveMeasurement composed = product_compose(im1, im2);
    std::string text = io::format_test(composed);
    try {
        io::write_file(out_path, text);
    } catch (const std::exception &e) {
        throw CommandError(kParseError, e.what());
    }
    ordered_json labels = ordered_json::array();
    for (const auto &[label, p] : composed.outcomes) {
        labels.push_back(label);
    }
    v["outcomes"] = labels;
    report.section("outputs")["path"] = out_path;
    report.section("outputs")["fnv1a64"] = io::fnv1a64(text);
    return kOk;
}

int cmd_eval(const std::string &file, const std::string &channel_path, const std::string &outcome, Report &report) {
    InteractiveMeasurement im = load_test(file, report);
    ChoiOperator j = load_channel(channel_path, report);
    if (j.dim_in() != im.dims.x || j.dim_out() != im.dims.y) {
        throw CommandError(kValidationError, "channel maps " + std::to_string(j.dim_in()) + " -> " +
                                                 std::to_string(j.dim_out()) + " but the test needs " +
                                                 std::to_string(im.dims.x) + " -> " + std::to_string(im.dims.y));
    }
    auto validity = validate(j, 1e-6);
    if (!validity.is_channel()) {
        throw CommandError(kValidationError, channel_path + ": not a channel (cp residual " +
                                                 std::to_string(validity.cp_residual) + ", tp residual " +
                                                 std::to_string(validity.tp_residual) + ")");
    }
    if (outcome != "all" && !im.outcomes.contains(outcome)) {
        throw CommandError(kParseError, "outcome '" + outcome + "' is not in " + file);
    }
    auto dist = outcome_distribution(im, j);
    auto &probs = report.section("probabilities");
    double total = 0;
    double worst = 0;
    for (const auto &[label, e] : dist) {
        total += e.direct;
        if (outcome != "all" && label != outcome) {
            continue;
        }
        worst = std::max(worst, e.discrepancy());
        probs[label] = {
            {"probability", std::clamp(e.direct, 0.0, 1.0)},
            {"direct", e.direct},
            {"via_choi", e.via_choi},
            {"discrepancy", e.discrepancy()},
        };
    }
    report.values()["total_probability"] = total;
    report.values()["max_discrepancy"] = worst;
    return kOk;
}

int cmd_demo_hedging(const GlobalOptions &g, Report &report) {
    HedgingReport r;
    try {
        r = verify_hedging(g.tol, g.max_iter);
    } catch (const SdpError &e) {
        throw CommandError(kNotConverged, e.what());
    }
    auto &v = report.values();
    v["single_max"] = r.single_max;
    v["single_min_fail"] = r.single_min_fail;
    v["joint_fail_min"] = r.joint_fail_min;
    v["joint_pass_max"] = r.joint_pass_max;
    v["strategy_joint_fail"] = r.strategy_joint_fail;
    v["strategy_pass_any"] = r.strategy_pass_any;
    v["classical_bound"] = r.classical_bound;
    v["classical_bound_violated"] = r.classical_bound_violated;
    v["fidelity_bound"] = fidelity_bound_chain().value;
    v["iterations"] = {
        {"single_max", r.single_max_solution.iterations},
        {"single_min", r.single_min_solution.iterations},
        {"joint_fail_min", r.joint_fail_solution.iterations},
        {"joint_pass_max", r.joint_pass_solution.iterations},
    };
    auto &dist = report.section("strategy_distribution");
    for (const auto &[label, prob] : r.strategy_distribution) {
        dist[label] = prob;
    }
    auto &checks = report.section("checks");
    for (const auto &[name, ok] : r.checks) {
        checks[name] = ok;
    }
    if (!r.all_checks_passed()) {
        throw CommandError(kAssertionFailed, "hedging assertions failed");
    }
    return kOk;
}

int cmd_bound(unsigned k, unsigned t, double p, const std::string &model, Report &report) {
    ThresholdQuery q{k, t, p};
    double value = 0;
    try {
        if (model == "classical") {
            value = classical_threshold_bound(q);
        } else if (model == "quantum") {
            value = quantum_threshold_bound(q);
        } else {
            throw std::invalid_argument("model must be 'classical' or 'quantum'");
        }
    } catch (const std::invalid_argument &e) {
        throw CommandError(kParseError, e.what());
    }
    auto &v = report.values();
    v["k"] = k;
    v["t"] = t;
    v["p"] = p;
    v["model"] = model;
    v["bound"] = value;
    return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    const auto start = std::chrono::steady_clock::now();
    GlobalOptions g;
    CLI::App app{"Optimal outcome probabilities of interactive measurements, via semidefinite programming."};
    app.name("qhedge");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.add_option("--tol", g.tol, "Solver tolerance on gap and residuals")->check(CLI::Range(1e-12, 1e-2));
    app.add_option("--max-iter", g.max_iter, "Interior-point iteration limit")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for the random-strategy cross-check");
    app.add_flag("--json", g.json, "Emit the report as JSON");
    app.fallthrough();

    std::string file, file2, channel, outcome = "all", sense = "max", out_path, model = "classical";
    unsigned k = 0, t = 0;
    double p = 0;

    auto *solve_cmd = app.add_subcommand("solve", "Max or min probability of one outcome over all channels");
    solve_cmd->add_option("file", file, "Test file")->required();
    solve_cmd->add_option("--outcome", outcome, "Outcome label")->required();
    solve_cmd->add_option("--sense", sense, "max or min")->check(CLI::IsMember({"max", "min"}));

    auto *product_cmd = app.add_subcommand("product", "Compose two tests run independently");
    product_cmd->add_option("file1", file, "First test file")->required();
    product_cmd->add_option("file2", file2, "Second test file")->required();
    product_cmd->add_option("-o,--out", out_path, "Where to write the composed test")->required();

    auto *eval_cmd = app.add_subcommand("eval", "Outcome probabilities under a given channel");
    eval_cmd->add_option("file", file, "Test file")->required();
    eval_cmd->add_option("channel", channel, "Channel file")->required();
    eval_cmd->add_option("--outcome", outcome, "Outcome label, or 'all'");

    auto *demo_cmd = app.add_subcommand("demo", "Built-in demonstrations");
    demo_cmd->require_subcommand(1);
    auto *hedging_cmd = demo_cmd->add_subcommand("hedging", "Verify perfect hedging on a pair of tests");

    auto *bound_cmd = app.add_subcommand("bound", "Threshold bound on passing at least t of k tests");
    bound_cmd->add_option("-k,--k", k, "Number of tests")->required();
    bound_cmd->add_option("-t,--t", t, "Required number of passes")->required();
    bound_cmd->add_option("-p,--p", p, "Single-test pass probability")->required();
    bound_cmd->add_option("--model", model, "classical or quantum")->check(CLI::IsMember({"classical", "quantum"}));

    std::vector<const char *> argv{"qhedge"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kParseError;
    }

    Report report(args);
    int code = kOk;
    std::string error;
    try {
        if (*solve_cmd) {
            report.set_command("solve");
            code = cmd_solve(g, file, outcome, sense, report);
        } else if (*product_cmd) {
            report.set_command("product");
            code = cmd_product(file, file2, out_path, report);
        } else if (*eval_cmd) {
            report.set_command("eval");
            code = cmd_eval(file, channel, outcome, report);
        } else if (*hedging_cmd) {
            report.set_command("demo hedging");
            code = cmd_demo_hedging(g, report);
        } else if (*bound_cmd) {
            report.set_command("bound");
            code = cmd_bound(k, t, p, model, report);
        }
    } catch (const CommandError &e) {
        code = e.code;
        error = e.what();
    } catch (const DimensionError &e) {
        code = kValidationError;
        error = e.what();
    } catch (const ChannelError &e) {
        code = kValidationError;
        error = e.what();
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report.finish(code, error, elapsed.count());
    report.emit(out, g.json);
    if (!error.empty()) {
        err << "qhedge: " << error << "\n";
    }
    return code;
}

}  // namespace qhedge::cli
