// Command-line front end: single runs, repeated experiments, the four canned
// parameter sweeps, and a physics/learner oracle suite.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosimrl/cartpole.hpp"
#include "cosimrl/errors.hpp"
#include "cosimrl/experiment.hpp"

namespace fs = std::filesystem;
using namespace cosimrl;

namespace {

constexpr double kPi = std::numbers::pi;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string sweep;
    std::uint64_t seed = 0;
    std::optional<double> force;
    std::optional<double> m_cart;
    std::optional<double> m_pole;
    std::optional<double> theta0_deg;
    std::optional<double> time_step;
    std::optional<double> pos_reward;
    std::optional<double> neg_reward;
    std::optional<int> episodes;
    std::optional<int> repeats;
    std::optional<int> max_steps;
    bool trajectory = false;
    bool visualize = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path,
                    "Environment configuration JSON file");
    cmd->add_option("--force", opt.force, "Force magnitude |f| in N");
    cmd->add_option("--m-cart", opt.m_cart, "Cart mass in kg");
    cmd->add_option("--m-pole", opt.m_pole, "Pole mass in kg");
    cmd->add_option("--theta0-deg", opt.theta0_deg,
                    "Initial pole angle in degrees (90 = upright)");
    cmd->add_option("--time-step", opt.time_step, "Simulation time step in s");
    cmd->add_option("--pos-reward", opt.pos_reward, "Reward per surviving step");
    cmd->add_option("--neg-reward", opt.neg_reward, "Reward on episode end");
    cmd->add_option("--episodes", opt.episodes, "Episodes per training run");
    cmd->add_option("--max-steps", opt.max_steps, "Step cap per episode");
    cmd->add_option("--seed", opt.seed, "Base RNG seed");
    cmd->add_option("--out", opt.out_dir, "Output directory for CSV files");
}

ExperimentSpec build_spec(const CliOptions& opt) {
    ExperimentSpec spec = default_experiment_spec();
    if (!opt.config_path.empty()) {
        spec.env = load_env_config(opt.config_path);
    }
    if (opt.m_cart) spec.env.model_parameters["m_cart"] = *opt.m_cart;
    if (opt.m_pole) spec.env.model_parameters["m_pole"] = *opt.m_pole;
    if (opt.theta0_deg) {
        spec.env.model_parameters["theta_0"] = *opt.theta0_deg * kPi / 180.0;
    }
    if (opt.time_step) spec.env.time_step = *opt.time_step;
    if (opt.pos_reward) spec.env.positive_reward = *opt.pos_reward;
    if (opt.neg_reward) spec.env.negative_reward = *opt.neg_reward;
    if (opt.force) spec.force_magnitude = *opt.force;
    if (opt.episodes) spec.n_episodes = *opt.episodes;
    if (opt.repeats) spec.n_repeats = *opt.repeats;
    if (opt.max_steps) spec.max_steps = *opt.max_steps;
    spec.base_seed = opt.seed;
    spec.visualize = opt.visualize;
    return spec;
}

// Tracks every path written so a failing run can clean up after itself.
std::vector<fs::path> g_written;

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    g_written.push_back(path);
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed while writing '" + path.string() + "'");
    }
}

void remove_partial_outputs() {
    for (const fs::path& path : g_written) {
        std::error_code ec;
        fs::remove(path, ec);
    }
    g_written.clear();
}

void write_result_csvs(const fs::path& dir, const std::vector<TaggedResult>& results) {
    fs::create_directories(dir);
    std::ostringstream episodes;
    write_episodes_csv(episodes, results);
    write_text_file(dir / "episodes.csv", episodes.str());

    std::ostringstream curves;
    write_curves_csv(curves, results);
    write_text_file(dir / "curves.csv", curves.str());

    std::ostringstream summary;
    write_summary_csv(summary, results);
    write_text_file(dir / "summary.csv", summary.str());
}

// Appends one CSV per episode under <out>/trajectories/.
class TrajectoryRecorder {
public:
    explicit TrajectoryRecorder(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    void start_repeat(int repeat) {
        repeat_ = repeat;
        episode_ = 0;
    }

    void on_step(const StepRecord& record) {
        if (record.step == 1) {
            ++episode_;
            char name[64];
            std::snprintf(name, sizeof(name), "traj_r%02d_e%04lld.csv", repeat_ + 1,
                          episode_);
            file_.close();
            const fs::path path = dir_ / name;
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path.string() + "'");
            }
            g_written.push_back(path);
            file_ << "t,x,x_dot,theta,theta_dot,f,reward,done\n";
        }
        const Observation& obs = *record.observation;
        char row[256];
        std::snprintf(row, sizeof(row), "%.6f,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                      record.t, obs[0], obs[1], obs[2], obs[3],
                      (*record.inputs)[0], record.reward, record.done ? 1 : 0);
        file_ << row;
    }

private:
    fs::path dir_;
    int repeat_ = 0;
    long long episode_ = 0;
    std::ofstream file_;
};

void print_summaries(const std::vector<TaggedResult>& results) {
    for (const auto& tagged : results) {
        const ExperimentResult& result = tagged.result;
        char buffer[160];
        std::string metrics = "no episodes";
        if (!result.lengths.empty() && !result.lengths.front().empty()) {
            const double final_smoothed = average_smoothed(result.lengths).back();
            double wall = 0.0;
            for (double t : result.exec_times) wall += t;
            std::snprintf(buffer, sizeof(buffer),
                          "final avg smoothed length %.2f steps, %.3g s/step, wall %.3f s",
                          final_smoothed, per_step_time(result), wall);
            metrics = buffer;
        }
        std::cout << tagged.sweep << '/' << tagged.grid_point << ": " << metrics;
        for (const auto& [repeat, message] : result.failures) {
            std::cout << "\n  repeat " << repeat + 1 << " failed: " << message;
        }
        std::cout << '\n';
    }
}

int run_single(const CliOptions& opt, const char* label, bool repeats_allowed) {
    ExperimentSpec spec = build_spec(opt);
    if (!repeats_allowed) {
        spec.n_repeats = 1;
    }

    std::optional<TrajectoryRecorder> recorder;
    RepeatHook hook;
    if (opt.trajectory) {
        recorder.emplace(fs::path(opt.out_dir) / "trajectories");
        hook = [&recorder](Environment& env, int repeat) {
            recorder->start_repeat(repeat);
            env.set_step_listener(
                [&recorder](const StepRecord& record) { recorder->on_step(record); });
        };
    }

    std::vector<TaggedResult> results;
    results.push_back({label, "base", run_experiment(spec, hook)});
    if (!opt.out_dir.empty()) {
        write_result_csvs(opt.out_dir, results);
    }
    print_summaries(results);
    return results.front().result.failures.empty() ? 0 : 2;
}

int run_sweep_command(const CliOptions& opt) {
    const auto kind = parse_sweep(opt.sweep);
    if (!kind) {
        std::cerr << "error: unknown sweep '" << opt.sweep << "'\n";
        return 1;
    }
    SweepOverrides overrides;
    overrides.n_episodes = opt.episodes;
    overrides.n_repeats = opt.repeats;
    overrides.max_steps = opt.max_steps;

    const std::vector<TaggedResult> results =
        run_sweep(*kind, build_spec(opt), overrides);
    write_result_csvs(opt.out_dir, results);
    print_summaries(results);
    for (const auto& tagged : results) {
        if (!tagged.result.failures.empty()) {
            return 2;
        }
    }
    return 0;
}

// --- oracle suite -----------------------------------------------------------

bool report(bool ok, const std::string& line) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << line << '\n';
    return ok;
}

double cartpole_energy(const CartPoleState& s, const CartPoleParams& p) {
    const double L = 0.5 * p.pole_length;
    const double bob_vx = s.x_dot - L * s.theta_dot * std::sin(s.theta);
    const double bob_vy = L * s.theta_dot * std::cos(s.theta);
    return 0.5 * p.m_cart * s.x_dot * s.x_dot +
           0.5 * p.m_pole * (bob_vx * bob_vx + bob_vy * bob_vy) +
           p.m_pole * p.g * L * std::sin(s.theta);
}

bool oracle_energy_conservation() {
    CartPoleBackend backend(0.001);
    backend.initialize({{"m_cart", 10.0},
                        {"m_pole", 1.0},
                        {"theta_0", 85.0 / 180.0 * kPi},
                        {"theta_dot_0", 0.0}});
    backend.set_inputs(std::vector<double>{0.0});
    const double initial = cartpole_energy(backend.state(), backend.params());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) { // 10 simulated seconds
        backend.do_step(0.1);
        worst = std::max(worst, std::abs(cartpole_energy(backend.state(),
                                                         backend.params()) -
                                         initial));
    }
    const double drift = worst / std::abs(initial);
    char line[128];
    std::snprintf(line, sizeof(line),
                  "energy conservation: relative drift %.3g over 10 s (tolerance 1e-6)",
                  drift);
    return report(drift <= 1e-6, line);
}

bool oracle_equilibria() {
    const CartPoleParams params;
    const CartPoleState upright{0.0, 0.0, kPi / 2.0, 0.0};
    const CartPoleState du = dynamics(upright, 0.0, params);
    const bool upright_exact = du.x_dot == 0.0 && du.theta_dot == 0.0;

    const CartPoleState hanging{0.0, 0.0, -kPi / 2.0, 0.0};
    const CartPoleState dh = dynamics(hanging, 0.0, params);
    const double hanging_residual =
        std::max(std::abs(dh.x_dot), std::abs(dh.theta_dot));

    char line[160];
    std::snprintf(line, sizeof(line),
                  "equilibria: upright accelerations %s, hanging residual %.3g "
                  "(tolerance 1e-13)",
                  upright_exact ? "exactly zero" : "NONZERO", hanging_residual);
    return report(upright_exact && hanging_residual <= 1e-13, line);
}

bool oracle_mirror_symmetry() {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> vel(-1.5, 1.5);
    std::uniform_real_distribution<double> angle(kPi / 2.0 - 0.4, kPi / 2.0 + 0.4);
    std::uniform_int_distribution<int> action(0, 1);

    CartPoleBackend backend;
    CartPoleBackend mirrored;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = pos(rng), x_dot = vel(rng);
        const double theta = angle(rng), theta_dot = vel(rng);
        const double force = action(rng) == 1 ? 11.0 : -11.0;

        backend.initialize({{"m_cart", 10.0}, {"m_pole", 1.0},
                            {"x_0", x}, {"x_dot_0", x_dot},
                            {"theta_0", theta}, {"theta_dot_0", theta_dot}});
        backend.set_inputs(std::vector<double>{force});
        backend.do_step(0.05);

        mirrored.initialize({{"m_cart", 10.0}, {"m_pole", 1.0},
                             {"x_0", -x}, {"x_dot_0", -x_dot},
                             {"theta_0", kPi - theta}, {"theta_dot_0", -theta_dot}});
        mirrored.set_inputs(std::vector<double>{-force});
        mirrored.do_step(0.05);

        const CartPoleState a = backend.state();
        const CartPoleState b = mirrored.state();
        worst = std::max({worst, std::abs(b.x + a.x), std::abs(b.x_dot + a.x_dot),
                          std::abs(b.theta - (kPi - a.theta)),
                          std::abs(b.theta_dot + a.theta_dot)});
    }
    char line[128];
    std::snprintf(line, sizeof(line),
                  "mirror symmetry: worst mismatch %.3g over 1000 steps (tolerance 1e-9)",
                  worst);
    return report(worst <= 1e-9, line);
}

bool oracle_rk4_order() {
    const auto identity = [](const StateVector& y) { return y; };
    const double exact = std::exp(1.0);
    double previous = 0.0;
    double h = 0.1;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 4; ++round) {
        StateVector y{1.0};
        advance(y, identity, 1.0, h);
        const double error = std::abs(y[0] - exact);
        if (round > 0) {
            worst_ratio = std::min(worst_ratio, previous / error);
        }
        previous = error;
        h /= 2.0;
    }
    char line[128];
    std::snprintf(line, sizeof(line),
                  "rk4 order: worst error ratio per halving %.1f (tolerance >= 12)",
                  worst_ratio);
    return report(worst_ratio >= 12.0, line);
}

bool oracle_discretizer_bijection() {
    const Discretizer disc(default_bins());
    std::vector<char> seen(10000, 0);
    bool ok = disc.n_states() == 10000;
    for (int a = 0; a < 10 && ok; ++a)
        for (int b = 0; b < 10 && ok; ++b)
            for (int c = 0; c < 10 && ok; ++c)
                for (int d = 0; d < 10; ++d) {
                    const int id = disc.encode(std::array{a, b, c, d});
                    if (id < 0 || id >= 10000 || seen[id] != 0) {
                        ok = false;
                        break;
                    }
                    seen[id] = 1;
                }
    return report(ok, "discretizer: encode is a bijection onto [0, 10^4)");
}

bool oracle_update_rule() {
    LearnerParams params{0.2, 1.0, 0.5, 0.99};
    QLearner learner(10, 2, params, 0);

    learner.set_q(0, 0, 0.0);
    learner.set_q(1, 0, 2.0);
    learner.set_q(1, 1, -1.0);
    learner.update(0, 0, 1.0, 1, false);
    const bool ongoing_ok = std::abs(learner.q(0, 0) - 0.6) <= 1e-12;

    learner.set_q(2, 1, 1.0);
    learner.update(2, 1, -100.0, 1, true);
    const bool terminal_ok = std::abs(learner.q(2, 1) - (-19.2)) <= 1e-12;

    QLearner frozen(4, 2, LearnerParams{0.0, 1.0, 0.5, 0.99}, 0);
    const double before = frozen.q(0, 0);
    frozen.update(0, 0, 42.0, 1, false);
    const bool frozen_ok = frozen.q(0, 0) == before;

    char line[160];
    std::snprintf(line, sizeof(line),
                  "value update: ongoing case %s, terminal case %s, zero rate %s",
                  ongoing_ok ? "0.6" : "WRONG", terminal_ok ? "-19.2" : "WRONG",
                  frozen_ok ? "unchanged" : "WRONG");
    return report(ongoing_ok && terminal_ok && frozen_ok, line);
}

int run_validate() {
    bool all = true;
    all &= oracle_energy_conservation();
    all &= oracle_equilibria();
    all &= oracle_mirror_symmetry();
    all &= oracle_rk4_order();
    all &= oracle_discretizer_bijection();
    all &= oracle_update_rule();
    std::cout << (all ? "all oracles passed" : "ORACLE FAILURES") << '\n';
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gym-style RL toolkit over fixed-step co-simulation backends"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* train_cmd =
        app.add_subcommand("train", "One Q-learning training run on the cart-pole");
    add_common_options(train_cmd, opt);
    train_cmd->add_flag("--trajectory", opt.trajectory,
                        "Dump one per-step CSV per episode (needs --out)");
    train_cmd->add_flag("--visualize", opt.visualize, "Render each step as text");

    CLI::App* experiment_cmd = app.add_subcommand(
        "experiment", "Repeated training runs with a fresh learner per repeat");
    add_common_options(experiment_cmd, opt);
    experiment_cmd->add_option("--repeats", opt.repeats, "Number of repeats");
    experiment_cmd->add_flag("--trajectory", opt.trajectory,
                             "Dump one per-step CSV per episode (needs --out)");
    experiment_cmd->add_flag("--visualize", opt.visualize, "Render each step as text");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run one of the canned parameter sweeps");
    add_common_options(sweep_cmd, opt);
    sweep_cmd->add_option("--repeats", opt.repeats, "Number of repeats");
    sweep_cmd
        ->add_option("--sweep", opt.sweep, "One of: force, mass, reward, timestep")
        ->required()
        ->check(CLI::IsMember({"force", "mass", "reward", "timestep"}));

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "Run the physics and learner oracle suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors exit with 1
    }

    if (opt.trajectory && opt.out_dir.empty()) {
        std::cerr << "error: --trajectory requires --out\n";
        return 1;
    }
    if (sweep_cmd->parsed() && opt.out_dir.empty()) {
        std::cerr << "error: sweep requires --out\n";
        return 1;
    }

    try {
        if (validate_cmd->parsed()) {
            return run_validate();
        }
        if (train_cmd->parsed()) {
            return run_single(opt, "train", /*repeats_allowed=*/false);
        }
        if (experiment_cmd->parsed()) {
            return run_single(opt, "experiment", /*repeats_allowed=*/true);
        }
        return run_sweep_command(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        remove_partial_outputs();
        return 2;
    }
}
