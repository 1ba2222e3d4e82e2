#include "dfix/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "dfix/errors.hpp"
#include "dfix/fixedpoint.hpp"
#include "dfix/graph.hpp"
#include "dfix/point.hpp"
#include "dfix/problems.hpp"
#include "dfix/random.hpp"
#include "dfix/solvers.hpp"

namespace dfix {
namespace {

// ---------------------------------------------------------------------------
// config document parsing
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
    text = trim(text);
    T value{};
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        fail("value '" + std::string(text) + "' of key '" + key + "' is not a valid number");
    }
    return value;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    while (true) {
        const auto comma = text.find(',');
        items.emplace_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return items;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& key, std::string_view text) {
    std::vector<T> values;
    for (const std::string& item : split_list(text)) {
        values.push_back(parse_number<T>(key, item));
    }
    return values;
}

const std::set<std::string> kExperiments = {"degree-sweep", "method-compare-kriging",
                                            "method-compare-sdd", "time-varying-sweep", "custom"};

/// Which config keys make sense for which experiment; everything else is
/// either an unknown key or a key/experiment mismatch, both hard errors.
bool key_applies(const std::string& key, const std::string& experiment) {
    static const std::set<std::string> universal = {"experiment", "seed",    "tol",
                                                    "max_iter",   "methods", "theta",
                                                    "repetitions"};
    if (universal.count(key)) return true;
    if (key == "n") return experiment != "custom";
    if (key == "m") {
        return experiment == "method-compare-sdd" || experiment == "time-varying-sweep" ||
               experiment == "custom";
    }
    if (key == "degrees") return experiment == "degree-sweep";
    if (key == "radii") return experiment == "method-compare-kriging";
    if (key == "gammas") return experiment == "time-varying-sweep";
    if (key == "box" || key == "placement") {
        return experiment == "degree-sweep" || experiment == "method-compare-kriging";
    }
    if (key == "system_file") return experiment == "custom";
    return false;  // unknown key
}

bool known_key(const std::string& key) {
    static const std::set<std::string> all = {"experiment", "seed",    "n",           "m",
                                              "degrees",    "radii",   "gammas",      "methods",
                                              "tol",        "max_iter","theta",       "repetitions",
                                              "box",        "placement", "system_file"};
    return all.count(key) != 0;
}

void check_degree(const std::string& key, int degree, int n) {
    if (degree <= 0 || degree % 2 != 0 || degree >= n) {
        fail("key '" + key + "': degree " + std::to_string(degree) +
             " must be even and lie strictly between 0 and n=" + std::to_string(n));
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> doc;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            fail("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key{trim(text.substr(0, eq))};
        const std::string value{trim(text.substr(eq + 1))};
        if (key.empty()) fail("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) fail("key '" + key + "' has an empty value");
        if (!doc.emplace(key, value).second) fail("duplicate key '" + key + "'");
    }

    const auto exp_it = doc.find("experiment");
    if (exp_it == doc.end()) fail("missing required key 'experiment'");
    ExperimentConfig cfg;
    cfg.experiment = exp_it->second;
    doc.erase(exp_it);
    if (!kExperiments.count(cfg.experiment)) {
        std::string names;
        for (const auto& e : kExperiments) names += (names.empty() ? "" : ", ") + e;
        fail("unknown experiment '" + cfg.experiment + "' (expected one of: " + names + ")");
    }

    // Per-experiment defaults; explicit keys below override them.
    const bool sdd_based =
        cfg.experiment == "method-compare-sdd" || cfg.experiment == "time-varying-sweep";
    cfg.repetitions = sdd_based ? 10 : 1;
    cfg.methods = cfg.experiment == "degree-sweep"
                      ? std::vector<Method>{Method::DfixJor}
                      : std::vector<Method>{Method::DfixJor, Method::Harnessing,
                                            Method::Projection};
    cfg.box = cfg.experiment == "method-compare-kriging" ? 3.0 : 30.0;
    cfg.placement = cfg.experiment == "method-compare-kriging" ? "grid" : "random";
    for (int d = 2; d <= 50; d += 2) cfg.degrees.push_back(d);
    cfg.radii = {0.7, 1.0, 1.2, 1.5};
    for (int i = 1; i <= 10; ++i) cfg.gammas.push_back(i / 10.0);
    if (cfg.experiment == "custom") cfg.m = 0;  // complete graph unless set

    const auto take = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = doc.find(key);
        if (it == doc.end()) return std::nullopt;
        if (!key_applies(key, cfg.experiment)) {
            fail("key '" + key + "' does not apply to experiment '" + cfg.experiment + "'");
        }
        std::string value = it->second;
        doc.erase(it);
        return value;
    };

    if (const auto v = take("seed")) cfg.seed = parse_number<std::uint64_t>("seed", *v);
    if (const auto v = take("n")) cfg.n = parse_number<int>("n", *v);
    if (cfg.n < 2) fail("n must be at least 2");
    if (const auto v = take("m")) cfg.m = parse_number<int>("m", *v);
    if (const auto v = take("degrees")) cfg.degrees = parse_number_list<int>("degrees", *v);
    if (const auto v = take("radii")) cfg.radii = parse_number_list<double>("radii", *v);
    if (const auto v = take("gammas")) cfg.gammas = parse_number_list<double>("gammas", *v);
    if (const auto v = take("methods")) {
        cfg.methods.clear();
        for (const std::string& name : split_list(*v)) {
            try {
                cfg.methods.push_back(method_from_name(name));
            } catch (const std::invalid_argument& e) {
                fail(std::string("key 'methods': ") + e.what());
            }
        }
    }
    if (const auto v = take("tol")) cfg.tol = parse_number<double>("tol", *v);
    if (const auto v = take("max_iter")) cfg.max_iter = parse_number<std::int64_t>("max_iter", *v);
    if (const auto v = take("theta")) cfg.theta = parse_number<double>("theta", *v);
    if (const auto v = take("repetitions")) {
        cfg.repetitions = parse_number<int>("repetitions", *v);
    }
    if (const auto v = take("box")) cfg.box = parse_number<double>("box", *v);
    if (const auto v = take("placement")) cfg.placement = *v;
    if (const auto v = take("system_file")) cfg.system_file = *v;

    if (!doc.empty()) {
        const std::string& key = doc.begin()->first;
        if (known_key(key)) {
            fail("key '" + key + "' does not apply to experiment '" + cfg.experiment + "'");
        }
        fail("unknown key '" + key + "'");
    }

    // Cross-field validation.
    if (cfg.methods.empty()) fail("methods list is empty");
    for (std::size_t a = 0; a < cfg.methods.size(); ++a) {
        for (std::size_t b = a + 1; b < cfg.methods.size(); ++b) {
            if (cfg.methods[a] == cfg.methods[b]) {
                fail("method '" + method_name(cfg.methods[a]) + "' is listed twice");
            }
        }
    }
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) fail("tol must be a positive number");
    if (cfg.max_iter < 1) fail("max_iter must be at least 1");
    if (!(cfg.theta > 0.0) || cfg.theta > 1.0) fail("theta must lie in (0, 1]");
    if (cfg.repetitions < 1) fail("repetitions must be at least 1");
    if (!(cfg.box > 0.0) || !std::isfinite(cfg.box)) fail("box must be a positive number");
    if (cfg.placement != "random" && cfg.placement != "grid") {
        fail("placement must be 'random' or 'grid', got '" + cfg.placement + "'");
    }
    if (cfg.placement == "grid" &&
        (cfg.experiment == "degree-sweep" || cfg.experiment == "method-compare-kriging")) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.n))));
        if (side < 2 || side * side != cfg.n) {
            fail("grid placement needs n to be a perfect square of at least 4");
        }
    }
    if (cfg.experiment == "degree-sweep") {
        if (cfg.degrees.empty()) fail("degrees list is empty");
        for (const int d : cfg.degrees) check_degree("degrees", d, cfg.n);
    }
    if (cfg.experiment == "method-compare-kriging") {
        if (cfg.radii.empty()) fail("radii list is empty");
        for (const double r : cfg.radii) {
            if (!(r > 0.0) || !std::isfinite(r)) fail("key 'radii': radius must be positive");
        }
    }
    if (cfg.experiment == "method-compare-sdd" || cfg.experiment == "time-varying-sweep") {
        check_degree("m", cfg.m, cfg.n);
    }
    if (cfg.experiment == "time-varying-sweep") {
        if (cfg.gammas.empty()) fail("gammas list is empty");
        for (const double g : cfg.gammas) {
            if (!(g > 0.0) || g > 1.0) fail("key 'gammas': fractions must lie in (0, 1]");
        }
    }
    if (cfg.experiment == "custom") {
        if (cfg.system_file.empty()) fail("experiment 'custom' requires key 'system_file'");
        if (cfg.m != 0 && (cfg.m < 0 || cfg.m % 2 != 0)) {
            fail("key 'm': degree must be even and positive (or omitted for a complete graph)");
        }
    }
    return cfg;
}

ExperimentConfig demo_config(const std::string& experiment) {
    std::string text;
    if (experiment == "degree-sweep") {
        text = "experiment = degree-sweep\nseed = 7\nn = 25\nplacement = grid\nbox = 2\n"
               "degrees = 2, 4, 6, 8\n";
    } else if (experiment == "method-compare-kriging") {
        text = "experiment = method-compare-kriging\nseed = 7\nn = 25\nradii = 1.6, 2.2, 3.1\n"
               "box = 3\n";
    } else if (experiment == "method-compare-sdd") {
        text = "experiment = method-compare-sdd\nseed = 7\nn = 30\nm = 4\nrepetitions = 3\n";
    } else if (experiment == "time-varying-sweep") {
        text = "experiment = time-varying-sweep\nseed = 7\nn = 30\nm = 4\n"
               "gammas = 0.3, 0.6, 1\nrepetitions = 2\n";
    } else {
        fail("no demo named '" + experiment +
             "' (try degree-sweep, method-compare-kriging, method-compare-sdd or "
             "time-varying-sweep)");
    }
    std::istringstream in(text);
    return parse_config(in);
}

void print_config(const ExperimentConfig& cfg, std::ostream& out) {
    const auto list_int = [](const std::vector<int>& v) {
        std::string s;
        for (const int x : v) s += (s.empty() ? "" : ", ") + std::to_string(x);
        return s;
    };
    const auto list_double = [](const std::vector<double>& v) {
        std::string s;
        char buf[64];
        for (const double x : v) {
            std::snprintf(buf, sizeof buf, "%g", x);
            s += (s.empty() ? "" : ", ") + std::string(buf);
        }
        return s;
    };
    out << "experiment = " << cfg.experiment << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.experiment != "custom") out << "n = " << cfg.n << "\n";
    if (cfg.experiment == "degree-sweep") out << "degrees = " << list_int(cfg.degrees) << "\n";
    if (cfg.experiment == "method-compare-kriging") {
        out << "radii = " << list_double(cfg.radii) << "\n";
    }
    if (cfg.experiment == "method-compare-sdd" || cfg.experiment == "time-varying-sweep" ||
        cfg.experiment == "custom") {
        out << "m = " << cfg.m << (cfg.m == 0 ? "  # complete graph" : "") << "\n";
    }
    if (cfg.experiment == "time-varying-sweep") out << "gammas = " << list_double(cfg.gammas) << "\n";
    if (cfg.experiment == "degree-sweep" || cfg.experiment == "method-compare-kriging") {
        out << "box = " << cfg.box << "\n";
        out << "placement = " << cfg.placement << "\n";
    }
    if (cfg.experiment == "custom") out << "system_file = " << cfg.system_file << "\n";
    std::string methods;
    for (const Method m : cfg.methods) {
        methods += (methods.empty() ? "" : ", ") + method_name(m);
    }
    out << "methods = " << methods << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", cfg.tol);
    out << "tol = " << buf << "\n";
    out << "max_iter = " << cfg.max_iter << "\n";
    std::snprintf(buf, sizeof buf, "%g", cfg.theta);
    out << "theta = " << buf << "\n";
    out << "repetitions = " << cfg.repetitions << "\n";
}

// ---------------------------------------------------------------------------
// experiment execution
// ---------------------------------------------------------------------------

namespace {

struct RunTask {
    Method method = Method::DfixJor;
    std::string param;       ///< summary CSV rendering of the parameter point
    std::string file_label;  ///< short filename fragment, e.g. "m8", "gamma0.3"
    int repetition = 0;
    const LinearSystem* sys = nullptr;
    GraphSequence schedule = GraphSequence::constant(Graph(1));
};

struct Plan {
    std::vector<std::unique_ptr<LinearSystem>> systems;
    std::vector<RunTask> tasks;
};

std::string render_double(double value, const char* format) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

std::vector<Point2> kriging_sites(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    std::vector<Point2> sites;
    sites.reserve(cfg.n);
    if (cfg.placement == "grid") {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.n))));
        const double spacing = 2.0 * cfg.box / (side - 1);
        for (int i = 0; i < side; ++i) {
            for (int j = 0; j < side; ++j) {
                sites.push_back({-cfg.box + spacing * i, -cfg.box + spacing * j});
            }
        }
    } else {
        for (int i = 0; i < cfg.n; ++i) {
            const double x = -cfg.box + 2.0 * cfg.box * rnd::uniform_open01(rng);
            const double y = -cfg.box + 2.0 * cfg.box * rnd::uniform_open01(rng);
            sites.push_back({x, y});
        }
    }
    return sites;
}

Point2 random_target(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    const double x = -cfg.box + 2.0 * cfg.box * rnd::uniform_open01(rng);
    const double y = -cfg.box + 2.0 * cfg.box * rnd::uniform_open01(rng);
    return {x, y};
}

Plan build_plan(const ExperimentConfig& cfg) {
    Plan plan;
    const auto add_tasks = [&](const LinearSystem* sys, const std::string& param,
                               const std::string& file_label, int rep,
                               const GraphSequence& schedule) {
        for (const Method method : cfg.methods) {
            plan.tasks.push_back(RunTask{method, param, file_label, rep, sys, schedule});
        }
    };

    if (cfg.experiment == "custom") {
        std::ifstream in(cfg.system_file);
        if (!in) fail("cannot open system_file '" + cfg.system_file + "'");
        auto sys = std::make_unique<LinearSystem>(read_system(in));
        const int n = sys->size();
        if (cfg.m != 0 && cfg.m >= n) {
            fail("key 'm': degree " + std::to_string(cfg.m) +
                 " is too large for the " + std::to_string(n) + "-dimensional system");
        }
        const Graph g = cfg.m == 0 ? Graph::complete(n) : make_regular_graph(n, cfg.m);
        const auto schedule = GraphSequence::constant(g);
        const LinearSystem* raw = sys.get();
        plan.systems.push_back(std::move(sys));
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            add_tasks(raw, "-", "sys", rep, schedule);
        }
        return plan;
    }

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(rep));
        if (cfg.experiment == "degree-sweep" || cfg.experiment == "method-compare-kriging") {
            const auto sites = kriging_sites(cfg, rng);
            const auto target = random_target(cfg, rng);
            auto sys = std::make_unique<LinearSystem>(make_kriging_system(sites, target));
            const LinearSystem* raw = sys.get();
            plan.systems.push_back(std::move(sys));
            if (cfg.experiment == "degree-sweep") {
                for (const int m : cfg.degrees) {
                    add_tasks(raw, std::to_string(m), "m" + std::to_string(m), rep,
                              GraphSequence::constant(make_regular_graph(cfg.n, m)));
                }
            } else {
                for (const double radius : cfg.radii) {
                    add_tasks(raw, render_double(radius, "%.17g"),
                              "R" + render_double(radius, "%g"), rep,
                              GraphSequence::constant(make_geometric_graph(sites, radius)));
                }
            }
        } else if (cfg.experiment == "method-compare-sdd") {
            auto sys = std::make_unique<LinearSystem>(make_sdd_system(cfg.n, rng));
            const LinearSystem* raw = sys.get();
            plan.systems.push_back(std::move(sys));
            add_tasks(raw, std::to_string(cfg.m), "m" + std::to_string(cfg.m), rep,
                      GraphSequence::constant(make_regular_graph(cfg.n, cfg.m)));
        } else {  // time-varying-sweep
            auto sys = std::make_unique<LinearSystem>(make_sdd_system(cfg.n, rng));
            const LinearSystem* raw = sys.get();
            plan.systems.push_back(std::move(sys));
            const Graph base = make_regular_graph(cfg.n, cfg.m);
            for (const double gamma : cfg.gammas) {
                add_tasks(raw, render_double(gamma, "%.17g"),
                          "gamma" + render_double(gamma, "%g"), rep,
                          GraphSequence::edge_sampled(base, gamma,
                                                      cfg.seed + static_cast<std::uint64_t>(rep)));
            }
        }
    }
    return plan;
}

struct TaskOutcome {
    RunTrace trace;
    std::vector<std::string> warnings;
};

TaskOutcome execute(const RunTask& task, const ExperimentConfig& cfg) {
    TaskOutcome outcome;
    RunOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.warn = [&outcome](const std::string& message) { outcome.warnings.push_back(message); };
    switch (task.method) {
        case Method::DfixJor: {
            const FixedPointMap map = jor_map(*task.sys, jor_relaxation(*task.sys, cfg.theta));
            outcome.trace =
                run_dfix(*task.sys, map, task.schedule, default_initialization(*task.sys), opts);
            return outcome;
        }
        case Method::Harnessing:
            outcome.trace =
                run_harnessing(*task.sys, task.schedule, default_initialization(*task.sys),
                               harnessing_step_size(*task.sys), opts);
            return outcome;
        case Method::Projection:
            outcome.trace = run_projection(*task.sys, task.schedule, opts);
            return outcome;
    }
    throw std::logic_error("unhandled method tag");
}

/// Runs all tasks on a small worker pool; outcomes land in submission order
/// so downstream output is independent of scheduling.
std::vector<TaskOutcome> execute_all(const Plan& plan, const ExperimentConfig& cfg) {
    std::vector<TaskOutcome> outcomes(plan.tasks.size());
    std::vector<std::exception_ptr> errors(plan.tasks.size());
    std::atomic<std::size_t> cursor{0};
    const std::size_t worker_count =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                       plan.tasks.size()));
    const auto worker = [&] {
        for (std::size_t i; (i = cursor.fetch_add(1)) < plan.tasks.size();) {
            try {
                outcomes[i] = execute(plan.tasks[i], cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
    return outcomes;
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) fail("cannot write trace file '" + file.string() + "'");
    out << "k,max_residual,error_inf,cum_flops,cum_traffic\n";
    char buf[192];
    for (const TraceRecord& r : trace.records) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%lld,%lld\n",
                      static_cast<long long>(r.k), r.max_residual, r.error_inf,
                      static_cast<long long>(r.cum_flops), static_cast<long long>(r.cum_traffic));
        out << buf;
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    const Plan plan = build_plan(cfg);
    const std::vector<TaskOutcome> outcomes = execute_all(plan, cfg);

    ExperimentResult result;
    result.all_converged = true;
    result.summary_path = out_dir / "summary.csv";

    std::ofstream summary(result.summary_path);
    if (!summary) fail("cannot write '" + result.summary_path.string() + "'");
    summary << "experiment,method,param,repetition,iterations,total_flops,total_traffic,status\n";

    for (std::size_t i = 0; i < plan.tasks.size(); ++i) {
        const RunTask& task = plan.tasks[i];
        const RunTrace& trace = outcomes[i].trace;
        const TraceRecord& last = trace.final_record();

        const std::string trace_name = "trace_" + cfg.experiment + "_" +
                                       method_name(task.method) + "_" + task.file_label + "_rep" +
                                       std::to_string(task.repetition) + ".csv";
        write_trace_csv(trace, out_dir / trace_name);

        SummaryRow row;
        row.method = method_name(task.method);
        row.param = task.param;
        row.repetition = task.repetition;
        row.iterations = trace.iterations();
        row.total_flops = last.cum_flops;
        row.total_traffic = last.cum_traffic;
        row.status = status_name(trace.status);
        result.rows.push_back(row);
        result.all_converged = result.all_converged && trace.status == RunStatus::Converged;

        summary << cfg.experiment << ',' << row.method << ',' << row.param << ','
                << row.repetition << ',' << row.iterations << ',' << row.total_flops << ','
                << row.total_traffic << ',' << row.status << '\n';

        for (const std::string& warning : outcomes[i].warnings) {
            log << cfg.experiment << " " << row.method << " param=" << row.param
                << " rep=" << row.repetition << ": warning: " << warning << "\n";
        }
    }
    summary.close();

    // Per-(parameter, method) averages over repetitions, in first-seen order.
    std::vector<std::pair<std::string, std::string>> groups;
    for (const SummaryRow& row : result.rows) {
        const auto key = std::make_pair(row.param, row.method);
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [param, method] : groups) {
        double iters = 0, flops = 0, traffic = 0;
        int count = 0, converged = 0;
        for (const SummaryRow& row : result.rows) {
            if (row.param != param || row.method != method) continue;
            ++count;
            iters += static_cast<double>(row.iterations);
            flops += static_cast<double>(row.total_flops);
            traffic += static_cast<double>(row.total_traffic);
            converged += row.status == "converged" ? 1 : 0;
        }
        log << cfg.experiment << " " << method << " param=" << param << ": " << converged << "/"
            << count << " converged, mean iterations " << render_double(iters / count, "%.1f")
            << ", mean flops " << render_double(flops / count, "%.6g") << ", mean traffic "
            << render_double(traffic / count, "%.6g") << "\n";
    }
    return result;
}

}  // namespace dfix
