// learnlab: experiment runner for finite-class learnability calculations.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 usage or config error, 3 resource budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "learnlab/complexity.hpp"
#include "learnlab/dims.hpp"
#include "learnlab/json_io.hpp"
#include "learnlab/learners.hpp"
#include "learnlab/regret.hpp"
#include "learnlab/verify.hpp"

namespace {

using learnlab::json;

/// Raised when a verify suite fails; maps to exit code 1.
struct VerifyFailure {};

void emit(const std::string& out_path, const json& j) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        learnlab::write_json_file(out_path, j);
    }
}

void emit_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open file for writing: " + out_path);
        out << text;
    }
}

std::string serialize_distribution(const learnlab::OutcomeSpace& space,
                                   const learnlab::Distribution& p) {
    std::string s;
    for (int i = 0; i < space.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (!s.empty()) s += ";";
        s += space.name_of(i) + ":" + learnlab::format_value(p[i]);
    }
    return s;
}

std::string serialize_weights(const learnlab::FiniteFunctionClass& cls,
                              const std::vector<double>& q) {
    std::string s;
    for (int j = 0; j < cls.size(); ++j) {
        if (q[j] <= 0.0) continue;
        if (!s.empty()) s += ";";
        s += cls.name(j) + ":" + learnlab::format_value(q[j]);
    }
    return s;
}

learnlab::RuleFactory make_rule_factory(const json& rule_spec,
                                        const learnlab::FiniteFunctionClass& cls,
                                        learnlab::Loss loss, const learnlab::OutcomeSpace& space) {
    const std::string kind = rule_spec.at("rule").get<std::string>();
    if (kind == "hedge") {
        return [&cls, loss, &space](std::uint64_t) {
            return std::make_unique<learnlab::Hedge>(cls, loss, space);
        };
    }
    if (kind == "ftl") {
        const auto tie = learnlab::parse_tie_break(rule_spec.value("tie_break", "lowest-index"));
        return [&cls, loss, &space, tie](std::uint64_t) {
            return std::make_unique<learnlab::FollowTheLeader>(cls, loss, space, tie);
        };
    }
    throw std::invalid_argument("rule spec: expected an online rule (hedge|ftl), got '" + kind +
                                "'");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"learnlab: finite-class learnability laboratory"};
    app.require_subcommand(1);

    // ----- dims -----
    auto* dims = app.add_subcommand("dims", "combinatorial dimensions");
    std::string dims_class, dims_kind, dims_out;
    double dims_gamma = 0.0;
    bool dims_witness = false;
    dims->add_option("--class", dims_class, "class spec file or inline JSON")->required();
    dims->add_option("--kind", dims_kind, "vc|ldim|fat|sfat")->required();
    dims->add_option("--gamma", dims_gamma, "scale (fat/sfat)");
    dims->add_flag("--witness", dims_witness, "include a shattering witness");
    dims->add_option("--out", dims_out, "output file (default: stdout)");
    dims->callback([&] {
        const auto cls = learnlab::class_from_json(learnlab::load_json_arg(dims_class));
        learnlab::DimensionReport rep;
        if (dims_kind == "vc") rep = learnlab::vc_dimension(cls, dims_witness);
        else if (dims_kind == "ldim") rep = learnlab::littlestone_dimension(cls, dims_witness);
        else if (dims_kind == "fat") rep = learnlab::fat_shattering(cls, dims_gamma, dims_witness);
        else if (dims_kind == "sfat")
            rep = learnlab::seq_fat_shattering(cls, dims_gamma, dims_witness);
        else throw std::invalid_argument("dims: unknown kind '" + dims_kind + "'");
        emit(dims_out, learnlab::dimension_report_to_json(rep));
    });

    // ----- complexity -----
    auto* cx = app.add_subcommand("complexity", "Rademacher complexities");
    std::string cx_class, cx_kind, cx_loss = "zero-one", cx_tree, cx_sample, cx_mode = "exact",
                cx_out;
    int cx_n = 0, cx_reps = 20000;
    std::uint64_t cx_seed = 1;
    cx->add_option("--class", cx_class)->required();
    cx->add_option("--kind", cx_kind, "rad|seqrad|seqrad-loss")->required();
    cx->add_option("--n", cx_n, "depth / sample size")->required();
    cx->add_option("--loss", cx_loss, "zero-one|absolute|squared (seqrad-loss)");
    cx->add_option("--tree", cx_tree, "fixed tree file (seqrad)");
    cx->add_option("--sample", cx_sample, "fixed sample file (rad)");
    cx->add_option("--mode", cx_mode, "exact|mc");
    cx->add_option("--reps", cx_reps, "Monte-Carlo replicates");
    cx->add_option("--seed", cx_seed);
    cx->add_option("--out", cx_out);
    cx->callback([&] {
        const auto cls = learnlab::class_from_json(learnlab::load_json_arg(cx_class));
        learnlab::ComplexityOptions opts;
        opts.mc_reps = cx_reps;
        opts.seed = cx_seed;
        if (cx_mode == "mc") opts.exact_path_limit = 0;
        else if (cx_mode != "exact") throw std::invalid_argument("complexity: bad --mode");
        learnlab::ComplexityValue value;
        if (cx_kind == "rad") {
            if (!cx_sample.empty()) {
                std::vector<int> sample;
                for (const auto& p : learnlab::load_json_arg(cx_sample))
                    sample.push_back(cls.domain().index_of(learnlab::point_from_json(p)));
                value = learnlab::rademacher_fixed_sample(cls, sample, opts);
            } else {
                value = learnlab::rademacher_worst_case(cls, cx_n, opts);
            }
        } else if (cx_kind == "seqrad") {
            if (!cx_tree.empty()) {
                const auto tree = learnlab::point_tree_from_json(
                    learnlab::load_json_arg(cx_tree), cls.domain());
                value = learnlab::seq_rademacher_fixed_tree(cls, tree, opts);
            } else {
                value = learnlab::seq_rademacher_sup(cls, cx_n, opts);
            }
        } else if (cx_kind == "seqrad-loss") {
            value = learnlab::seq_rademacher_loss_class(cls, learnlab::Loss::parse(cx_loss), cx_n,
                                                        opts);
        } else {
            throw std::invalid_argument("complexity: unknown kind '" + cx_kind + "'");
        }
        json j;
        j["kind"] = cx_kind;
        j["n"] = value.n;
        j["value"] = value.value;
        j["mode"] = value.exact ? "exact" : "monte-carlo";
        j["stderr"] = value.stderr_;
        if (value.lower_estimate) j["lower_estimate"] = true;
        emit(cx_out, j);
    });

    // ----- simulate -----
    auto* sim = app.add_subcommand("simulate", "sample paths from a process");
    std::string sim_class, sim_process, sim_out;
    int sim_reps = 1;
    std::uint64_t sim_seed = 1;
    sim->add_option("--class", sim_class, "class spec (outcome space context)");
    sim->add_option("--process", sim_process)->required();
    sim->add_option("--reps", sim_reps);
    sim->add_option("--seed", sim_seed)->required();
    sim->add_option("--out", sim_out);
    sim->callback([&] {
        const json spec = learnlab::load_json_arg(sim_process);
        std::ostringstream csv;
        csv << "rep,t,x,y,p_t\n";
        const std::string kind = spec.at("process").get<std::string>();
        if (kind == "adversarial-threshold" && !spec.contains("fixed_b_seed")) {
            const learnlab::AdversarialProcess proc(spec.at("n").get<int>());
            for (int r = 0; r < sim_reps; ++r) {
                const auto path = proc.sample(learnlab::path_seed(sim_seed, r));
                for (std::size_t t = 0; t < path.steps.size(); ++t) {
                    const auto& step = path.steps[t];
                    const auto x = learnlab::adversarial_x_for_level(path.b, path.realized_l[t]);
                    const int y = step.eps > 0 ? step.y_high : step.y_low;
                    const auto x_low = learnlab::adversarial_x_for_level(path.b, step.l_low);
                    const auto x_high = learnlab::adversarial_x_for_level(path.b, step.l_high);
                    csv << r + 1 << "," << t + 1 << "," << x.to_string() << "," << y << ",\""
                        << x_low.to_string() << "|" << step.y_low << ":0.5;"
                        << x_high.to_string() << "|" << step.y_high << ":0.5\"\n";
                }
            }
        } else {
            if (sim_class.empty())
                throw std::invalid_argument("simulate: --class required for finite processes");
            const auto cls = learnlab::class_from_json(learnlab::load_json_arg(sim_class));
            const learnlab::OutcomeSpace space(cls.domain(), cls.labels());
            const auto kernel = learnlab::kernel_from_json(spec, space);
            for (int r = 0; r < sim_reps; ++r) {
                const auto path = kernel->sample_path(learnlab::path_seed(sim_seed, r));
                for (int t = 0; t < path.horizon(); ++t) {
                    const auto& z = space.at(path.z[t]);
                    csv << r + 1 << "," << t + 1 << "," << space.domain().points[z.x] << ","
                        << learnlab::format_value(z.y) << ",\""
                        << serialize_distribution(space, path.step_dists[t]) << "\"\n";
                }
            }
        }
        emit_text(sim_out, csv.str());
    });

    // ----- learn -----
    auto* learn = app.add_subcommand("learn", "run a learning rule");
    std::string learn_rule = "erm", learn_class, learn_loss = "zero-one", learn_sample,
                learn_process, learn_tie = "lowest-index", learn_out;
    std::uint64_t learn_seed = 1;
    learn->add_option("--rule", learn_rule, "erm|hedge|ftl");
    learn->add_option("--class", learn_class)->required();
    learn->add_option("--loss", learn_loss);
    learn->add_option("--sample", learn_sample, "sample file: [[x,y],...]");
    learn->add_option("--process", learn_process, "process spec (prequential run)");
    learn->add_option("--tie-break", learn_tie);
    learn->add_option("--seed", learn_seed);
    learn->add_option("--out", learn_out);
    learn->callback([&] {
        const auto cls = learnlab::class_from_json(learnlab::load_json_arg(learn_class));
        const learnlab::OutcomeSpace space(cls.domain(), cls.labels());
        const auto loss = learnlab::Loss::parse(learn_loss);
        if (learn_rule == "erm") {
            if (learn_sample.empty()) throw std::invalid_argument("learn erm: --sample required");
            const auto seq =
                learnlab::sequence_from_json(learnlab::load_json_arg(learn_sample), space);
            learnlab::Rng rng(learn_seed);
            const int idx = learnlab::erm(cls, loss, space, seq,
                                          learnlab::parse_tie_break(learn_tie), &rng);
            double mean_loss = 0.0;
            for (int z : seq) mean_loss += learnlab::loss_eval(loss, cls, space.at(z), idx);
            if (!seq.empty()) mean_loss /= static_cast<double>(seq.size());
            json j;
            j["rule"] = "erm";
            j["index"] = idx;
            j["name"] = cls.name(idx);
            j["empirical_mean_loss"] = mean_loss;
            emit(learn_out, j);
            return;
        }
        json rule_spec = {{"rule", learn_rule}, {"tie_break", learn_tie}};
        const auto factory = make_rule_factory(rule_spec, cls, loss, space);
        std::ostringstream csv;
        csv << "t,distribution,z,loss,conditional_risk\n";
        if (!learn_process.empty()) {
            const auto kernel = learnlab::kernel_from_json(
                learnlab::load_json_arg(learn_process), space);
            auto rule = factory(learn_seed);
            const auto traj = learnlab::run_prequential(*rule, cls, loss, *kernel, learn_seed);
            for (std::size_t t = 0; t < traj.steps.size(); ++t) {
                const auto& step = traj.steps[t];
                csv << t + 1 << ",\"" << serialize_weights(cls, step.q) << "\","
                    << space.name_of(step.z) << "," << learnlab::format_value(step.realized_loss)
                    << "," << learnlab::format_value(step.conditional_risk) << "\n";
            }
        } else if (!learn_sample.empty()) {
            const auto seq =
                learnlab::sequence_from_json(learnlab::load_json_arg(learn_sample), space);
            auto rule = factory(learn_seed);
            for (std::size_t t = 0; t < seq.size(); ++t) {
                const auto& q = rule->predict();
                double step_loss = 0.0;
                for (int j = 0; j < cls.size(); ++j)
                    step_loss += q[j] * learnlab::loss_eval(loss, cls, space.at(seq[t]), j);
                csv << t + 1 << ",\"" << serialize_weights(cls, q) << "\","
                    << space.name_of(seq[t]) << "," << learnlab::format_value(step_loss) << ",\n";
                rule->update(seq[t]);
            }
        } else {
            throw std::invalid_argument("learn: need --sample or --process");
        }
        emit_text(learn_out, csv.str());
    });

    // ----- regret -----
    auto* rg = app.add_subcommand("regret", "regret and deviation estimators");
    std::string rg_est, rg_class, rg_process, rg_rule = "{\"rule\":\"erm\"}",
                rg_loss = "zero-one", rg_mode = "exact", rg_out;
    int rg_reps = 1000, rg_n = 0;
    std::uint64_t rg_seed = 0;
    bool rg_seed_set = false;
    rg->add_option("--estimator", rg_est, "gen|preq|online|umlln|decomp")->required();
    rg->add_option("--class", rg_class);
    rg->add_option("--process", rg_process);
    rg->add_option("--rule", rg_rule, "rule spec file or inline JSON");
    rg->add_option("--loss", rg_loss);
    rg->add_option("--reps", rg_reps);
    rg->add_option("--n", rg_n, "horizon (online worst case)");
    rg->add_option("--mode", rg_mode, "exact|search (online worst case)");
    rg->add_option("--seed", rg_seed)->required()->each([&](const std::string&) {
        rg_seed_set = true;
    });
    rg->add_option("--out", rg_out);
    rg->callback([&] {
        (void)rg_seed_set;
        const auto loss = learnlab::Loss::parse(rg_loss);
        const json rule_spec = learnlab::load_json_arg(rg_rule);
        json result;
        result["estimator"] = rg_est;
        json config;
        config["estimator"] = rg_est;
        config["loss"] = rg_loss;
        config["rule"] = rule_spec;
        config["reps"] = rg_reps;
        config["seed"] = rg_seed;

        auto finish = [&](const learnlab::RegretEstimate& est, const std::string& series,
                          int horizon) {
            result["mean"] = est.mean;
            result["stderr"] = est.stderr_;
            result["reps"] = est.reps;
            result["seed"] = est.seed;
            if (est.lower_estimate) result["lower_estimate"] = true;
            result["series"] = series;
            config["n"] = horizon;
            result["config"] = config;
            emit(rg_out, result);
        };

        if (rg_est == "online") {
            if (rg_class.empty() || rg_n < 1)
                throw std::invalid_argument("regret online: need --class and --n");
            const auto cls = learnlab::class_from_json(learnlab::load_json_arg(rg_class));
            const learnlab::OutcomeSpace space(cls.domain(), cls.labels());
            config["class"] = learnlab::load_json_arg(rg_class);
            config["mode"] = rg_mode;
            const auto factory = make_rule_factory(rule_spec, cls, loss, space);
            const auto est = learnlab::online_worst_case(cls, loss, space, factory, rg_n,
                                                         rg_mode == "exact", rg_seed);
            finish(est, "online/" + rule_spec.at("rule").get<std::string>(), rg_n);
            return;
        }

        if (rg_process.empty()) throw std::invalid_argument("regret: --process required");
        const json proc_spec = learnlab::load_json_arg(rg_process);
        config["process"] = proc_spec;
        const std::string proc_kind = proc_spec.at("process").get<std::string>();

        // Native adversarial estimators (hidden vector drawn per path).
        if (rg_est == "gen" && proc_kind == "adversarial-threshold" &&
            !proc_spec.contains("fixed_b_seed")) {
            const learnlab::AdversarialProcess proc(proc_spec.at("n").get<int>());
            const auto tie =
                learnlab::parse_tie_break(rule_spec.value("tie_break", "lowest-index"));
            finish(learnlab::adversarial_gen_risk_estimate(proc, tie, rg_reps, rg_seed),
                   "gen/adversarial-threshold", proc.n);
            return;
        }
        if (rg_est == "gen" && proc_kind == "adversarial-regression") {
            const learnlab::AdversarialProcess proc(proc_spec.at("n").get<int>());
            const learnlab::RegressionLevels levels(proc_spec.at("u").get<double>(),
                                                    proc_spec.at("uprime").get<double>(),
                                                    proc_spec.at("gamma").get<double>());
            const auto tie =
                learnlab::parse_tie_break(rule_spec.value("tie_break", "lowest-index"));
            finish(learnlab::adversarial_regression_risk_estimate(proc, levels, tie, rg_reps,
                                                                  rg_seed),
                   "gen/adversarial-regression", proc.n);
            return;
        }

        if (rg_class.empty()) throw std::invalid_argument("regret: --class required");
        const auto cls = learnlab::class_from_json(learnlab::load_json_arg(rg_class));
        const learnlab::OutcomeSpace space(cls.domain(), cls.labels());
        config["class"] = learnlab::load_json_arg(rg_class);
        const auto kernel = learnlab::kernel_from_json(proc_spec, space);

        if (rg_est == "gen") {
            const auto tie =
                learnlab::parse_tie_break(rule_spec.value("tie_break", "lowest-index"));
            finish(learnlab::gen_value_estimate(cls, loss, *kernel, tie, rg_reps, rg_seed),
                   "gen/" + kernel->name(), kernel->horizon());
        } else if (rg_est == "preq") {
            const auto factory = make_rule_factory(rule_spec, cls, loss, space);
            finish(learnlab::preq_value_estimate(cls, loss, *kernel, factory, rg_reps, rg_seed),
                   "preq/" + kernel->name(), kernel->horizon());
        } else if (rg_est == "umlln") {
            finish(learnlab::martingale_deviation(*kernel, cls, rg_reps, rg_seed),
                   "umlln/" + kernel->name(), kernel->horizon());
        } else if (rg_est == "decomp") {
            const auto factory = make_rule_factory(rule_spec, cls, loss, space);
            const auto rep = learnlab::decomposition_report(cls, loss, *kernel, factory, rg_reps,
                                                            rg_seed);
            result["terms"] = {
                {"martingale", {{"mean", rep.term_martingale.mean},
                                {"stderr", rep.term_martingale.stderr_}}},
                {"online", {{"mean", rep.term_online.mean}, {"stderr", rep.term_online.stderr_}}},
                {"comparator", {{"mean", rep.term_comparator.mean},
                                {"stderr", rep.term_comparator.stderr_}}}};
            result["max_sum_mismatch"] = rep.max_sum_mismatch;
            finish(rep.total, "decomp/" + kernel->name(), kernel->horizon());
        } else {
            throw std::invalid_argument("regret: unknown estimator '" + rg_est + "'");
        }
    });

    // ----- verify -----
    auto* vf = app.add_subcommand("verify", "theorem-level numerical checks");
    std::string vf_suite, vf_out;
    std::uint64_t vf_seed = 20240601;
    vf->add_option("--suite", vf_suite, "suite name or 'all'")->required();
    vf->add_option("--seed", vf_seed);
    vf->add_option("--out", vf_out);
    vf->callback([&] {
        const auto report = learnlab::run_verify_suite(vf_suite, vf_seed);
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << c.threshold
                      << "]\n";
        if (!vf_out.empty()) learnlab::write_json_file(vf_out, report.to_json());
        if (!report.pass) throw VerifyFailure{};
    });

    // ----- plot-data -----
    auto* pd = app.add_subcommand("plot-data", "tidy CSV from result files");
    std::vector<std::string> pd_files;
    std::string pd_kind = "regret-vs-n", pd_out;
    pd->add_option("--kind", pd_kind, "<name>-vs-n or <name>-vs-gamma");
    pd->add_option("--out", pd_out);
    pd->add_option("files", pd_files, "result JSON files");
    pd->callback([&] {
        if (pd_files.empty()) throw std::invalid_argument("plot-data: no input files");
        std::string x_key;
        if (pd_kind.size() >= 5 && pd_kind.substr(pd_kind.size() - 5) == "-vs-n") x_key = "n";
        else if (pd_kind.size() >= 9 && pd_kind.substr(pd_kind.size() - 9) == "-vs-gamma")
            x_key = "gamma";
        else throw std::invalid_argument("plot-data: kind must end in -vs-n or -vs-gamma");
        struct Row {
            double x;
            std::string series;
            double mean, se;
        };
        std::vector<Row> rows;
        for (const auto& f : pd_files) {
            const json j = learnlab::load_json_file(f);
            if (!j.contains("config") || !j.at("config").contains(x_key))
                throw std::invalid_argument("plot-data: result lacks x-axis key '" + x_key +
                                            "': " + f);
            rows.push_back(Row{j.at("config").at(x_key).get<double>(),
                               j.value("series", std::string("series")),
                               j.at("mean").get<double>(), j.at("stderr").get<double>()});
        }
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return std::tie(a.series, a.x) < std::tie(b.series, b.x);
        });
        std::ostringstream csv;
        csv << "x,series,mean,stderr\n";
        for (const auto& r : rows)
            csv << learnlab::format_value(r.x) << "," << r.series << ","
                << learnlab::format_value(r.mean) << "," << learnlab::format_value(r.se) << "\n";
        emit_text(pd_out, csv.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const VerifyFailure&) {
        return 1;
    } catch (const learnlab::ResourceBudgetError& e) {
        std::cerr << "resource budget: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
