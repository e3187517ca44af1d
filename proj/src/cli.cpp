#include "nlsubdiv/cli.hpp"

#include "nlsubdiv/io.hpp"
#include "nlsubdiv/lagrange.hpp"
#include "nlsubdiv/parallel.hpp"
#include "nlsubdiv/power_mean.hpp"
#include "nlsubdiv/reference_data.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace nlsd::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

const std::vector<std::string> commands{"subdivide", "decompose",   "reconstruct", "threshold",
                                        "contraction", "holder",    "spectral",    "table1",
                                        "table2",    "figure1",     "lemma-suite"};

bool needs_input(const std::string& c) {
    return c == "subdivide" || c == "decompose" || c == "reconstruct" || c == "threshold";
}

bool needs_scheme(const std::string& c) {
    return c == "subdivide" || c == "decompose" || c == "contraction" || c == "holder" || c == "spectral";
}

std::uint64_t parse_seed(const std::string& text, const char* where) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 20) {
        throw UsageError(std::string(where) + ": seed must be a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(where) + ": seed '" + text + "' is out of range");
    }
}

Boundary parse_boundary_arg(const std::string& text) {
    try {
        return parse_boundary(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

SchemeSpec make_scheme(const std::string& text) {
    try {
        if (!text.empty() && text.front() == '{') return io::scheme_from_json(Json::parse(text));
        return SchemeSpec::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("scheme descriptor: ") + e.what());
    } catch (const Error& e) {
        throw UsageError(std::string("scheme: ") + e.what());
    }
}

void apply_config(RunConfig& cfg, const Json& j) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = it.key();
        std::replace(key.begin(), key.end(), '-', '_');
        const Json& v = it.value();
        try {
            if (key == "command") cfg.command = v.get<std::string>();
            else if (key == "scheme") cfg.scheme = v.is_string() ? v.get<std::string>() : v.dump();
            else if (key == "input") cfg.input = v.get<std::string>();
            else if (key == "output") cfg.output = v.get<std::string>();
            else if (key == "format") cfg.format = v.get<std::string>();
            else if (key == "levels") cfg.levels = v.get<int>();
            else if (key == "trials") cfg.trials = v.get<int>();
            else if (key == "seed") cfg.seed = v.is_string() ? parse_seed(v.get<std::string>(), "config") : v.get<std::uint64_t>();
            else if (key == "tolerance") cfg.tolerance = v.get<double>();
            else if (key == "fit_min") cfg.fit_min = v.get<int>();
            else if (key == "fit_max") cfg.fit_max = v.get<int>();
            else if (key == "boundary") cfg.boundary = parse_boundary_arg(v.get<std::string>());
            else if (key == "delta") cfg.delta = v.get<std::string>();
            else if (key == "mode") cfg.mode = v.get<std::string>();
            else if (key == "steps") cfg.steps = v.get<int>();
            else if (key == "window") cfg.window = v.get<int>();
            else if (key == "threads") cfg.threads = v.get<unsigned>();
            else if (key == "points") cfg.points = v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
            else throw UsageError("config: unknown key '" + it.key() + "'");
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config key '" + it.key() + "': " + e.what());
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string extension(const std::string& path) {
    auto e = fs::path(path).extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

std::string output_format(const RunConfig& cfg, const std::string& fallback) {
    if (!cfg.format.empty()) return cfg.format;
    const auto e = extension(cfg.output);
    if (e == ".csv") return "csv";
    if (e == ".json") return "json";
    if (e == ".bin") return "binary";
    return fallback;
}

void write_artifact(const RunConfig& cfg, const std::string& bytes, std::ostream& out) {
    if (cfg.output.empty()) {
        out << bytes;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
    f << bytes;
    if (!f) throw Error(ErrorKind::InvalidArgument, "failed to write '" + cfg.output + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, what + ": " + e.what());
    }
}

bool looks_like_json(const std::string& text) {
    const auto p = text.find_first_not_of(" \t\r\n");
    return p != std::string::npos && (text[p] == '{' || text[p] == '[');
}

struct Input {
    std::optional<Sequence> scalar;
    std::optional<PointPair2D> points;
};

Input read_sequence_input(const RunConfig& cfg) {
    const auto text = read_file(cfg.input);
    if (!looks_like_json(text)) {
        return {io::sequence_from_csv(text, cfg.boundary.value_or(Boundary::Periodic)), std::nullopt};
    }
    Json j = parse_json(text, cfg.input);
    auto with_boundary = [&](Json s) {
        if (cfg.boundary) s["boundary"] = std::string(to_string(*cfg.boundary));
        return io::sequence_from_json(s);
    };
    if (j.is_object() && j.contains("x") && j.contains("f")) {
        return {std::nullopt, PointPair2D(with_boundary(j.at("x")), with_boundary(j.at("f")),
                                          j.value("x_period", 0.0))};
    }
    return {with_boundary(j), std::nullopt};
}

std::string sequence_bytes(const RunConfig& cfg, const Sequence& s) {
    const auto fmt = output_format(cfg, "csv");
    if (fmt == "json") return io::to_json(s).dump(2) + "\n";
    if (fmt == "csv") return io::sequence_to_csv(s);
    throw UsageError("sequences are written as csv or json, not " + fmt);
}

std::string points_bytes(const RunConfig& cfg, const PointPair2D& p) {
    const auto fmt = output_format(cfg, "csv");
    if (fmt == "json") {
        Json j;
        j["x"] = io::to_json(p.x);
        j["f"] = io::to_json(p.f);
        j["x_period"] = p.x_period;
        return j.dump(2) + "\n";
    }
    if (fmt != "csv") throw UsageError("point sequences are written as csv or json, not " + fmt);
    std::string out = "abscissa,value\n";
    for (std::size_t k = 0; k < p.x.size(); ++k) out += io::format_double(p.x[k]) + ',' + io::format_double(p.f[k]) + '\n';
    return out;
}

std::string pyramid_bytes(const RunConfig& cfg, const Pyramid& p) {
    const auto fmt = output_format(cfg, "json");
    if (fmt == "json") return io::to_json(p).dump() + "\n";
    if (fmt == "binary") {
        std::ostringstream ss(std::ios::binary);
        io::write_pyramid_binary(ss, p);
        return ss.str();
    }
    throw UsageError("pyramids are written as json or binary, not " + fmt);
}

std::optional<Pyramid> try_read_pyramid(const std::string& text, const std::string& path) {
    if (text.rfind("NLSDPYR1", 0) == 0) {
        std::istringstream in(text, std::ios::binary);
        return io::read_pyramid_binary(in);
    }
    if (!looks_like_json(text)) return std::nullopt;
    const Json j = parse_json(text, path);
    if (!j.is_object() || !j.contains("details")) return std::nullopt;
    return io::pyramid_from_json(j);
}

const Json& reference() {
    static const Json j = Json::parse(reference_values_json);
    return j;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

void print_report(const RunConfig& cfg, const Json& report, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!cfg.output.empty()) write_artifact(cfg, text, out);
}

void cmd_subdivide(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = make_scheme(*cfg.scheme);
    const int levels = cfg.levels.value_or(1);
    auto in = read_sequence_input(cfg);
    if (scheme.is_spherical()) {
        const PointPair2D p = in.points ? *in.points : PointPair2D::from_graph(*in.scalar);
        write_artifact(cfg, points_bytes(cfg, subdivide_points(scheme, p, levels)), out);
        return;
    }
    if (!in.scalar) throw UsageError(scheme.name() + " refines scalar sequences, not point pairs");
    write_artifact(cfg, sequence_bytes(cfg, subdivide(scheme, *in.scalar, levels)), out);
}

void cmd_decompose(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = make_scheme(*cfg.scheme);
    const int levels = cfg.levels.value_or(1);
    auto in = read_sequence_input(cfg);
    const Pyramid p = in.points ? decompose_points(scheme, *in.points, levels) : decompose(scheme, *in.scalar, levels);
    write_artifact(cfg, pyramid_bytes(cfg, p), out);
}

std::string reconstruction_bytes(const RunConfig& cfg, const Pyramid& p) {
    return p.x ? points_bytes(cfg, reconstruct_points(p)) : sequence_bytes(cfg, reconstruct(p));
}

void cmd_reconstruct(const RunConfig& cfg, std::ostream& out) {
    const auto text = read_file(cfg.input);
    const auto p = try_read_pyramid(text, cfg.input);
    if (!p) throw Error(ErrorKind::CorruptPyramid, "'" + cfg.input + "' is not a pyramid file");
    write_artifact(cfg, reconstruction_bytes(cfg, *p), out);
}

void cmd_threshold(const RunConfig& cfg, std::ostream& out) {
    const auto text = read_file(cfg.input);
    Json summary;
    summary["tolerance"] = cfg.tolerance;
    if (auto p = try_read_pyramid(text, cfg.input)) {
        const auto t = threshold(*p, cfg.tolerance);
        std::size_t total = 0;
        for (const auto& d : t.pyramid.f.details) total += d.size();
        if (t.pyramid.x) {
            for (const auto& d : t.pyramid.x->details) total += d.size();
        }
        summary["scheme"] = t.pyramid.scheme.name();
        summary["zeroed"] = t.zeroed;
        summary["details"] = total;
        if (!cfg.output.empty()) write_artifact(cfg, pyramid_bytes(cfg, t.pyramid), out);
        out << summary.dump(2) << "\n";
        return;
    }
    if (!cfg.scheme) throw UsageError("threshold on a sequence needs --scheme");
    const auto scheme = make_scheme(*cfg.scheme);
    const int levels = cfg.levels.value_or(1);
    auto in = read_sequence_input(cfg);
    if (in.points) throw UsageError("threshold reads point pairs only from a pyramid file");
    const auto fine = *in.scalar;
    const auto t = threshold(decompose(scheme, fine, levels), cfg.tolerance);
    const auto back = reconstruct(t.pyramid);
    double err = 0.0;
    for (std::size_t k = 0; k < fine.size(); ++k) err = std::max(err, std::abs(back[k] - fine[k]));
    summary["scheme"] = scheme.name();
    summary["levels"] = levels;
    summary["zeroed"] = t.zeroed;
    summary["max_error"] = err;
    summary["error_over_tolerance"] = cfg.tolerance > 0.0 ? Json(err / cfg.tolerance) : Json(nullptr);
    if (!cfg.output.empty()) write_artifact(cfg, sequence_bytes(cfg, back), out);
    out << summary.dump(2) << "\n";
}

void cmd_contraction(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = make_scheme(*cfg.scheme);
    const int trials = cfg.trials.value_or(10000);
    EstimatorOptions opts{cfg.window, cfg.threads};
    const DeltaSpec delta = cfg.delta.empty() ? natural_delta(scheme) : DeltaSpec::parse(cfg.delta);
    if (cfg.mode == "perturbation") {
        Json j;
        j["scheme"] = scheme.name();
        j["delta"] = natural_delta(scheme).name();
        j["perturbation_bound"] = perturbation_bound(scheme, trials, cfg.seed, opts);
        j["trials"] = trials;
        j["seed"] = cfg.seed;
        print_report(cfg, j, out);
        return;
    }
    const auto r = cfg.mode == "lipschitz" ? lipschitz_contraction(scheme, delta, trials, cfg.seed, opts)
                                           : empirical_contraction(scheme, delta, cfg.steps, trials, cfg.seed, opts);
    Json j = io::to_json(r);
    j["mode"] = cfg.mode;
    j["predicted_holder_exponent"] = r.c_estimate > 0.0 && r.c_estimate < 1.0
                                         ? Json(predicted_holder_exponent(r.c_estimate))
                                         : Json(nullptr);
    print_report(cfg, j, out);
}

void cmd_holder(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = make_scheme(*cfg.scheme);
    Sequence f0 = [&] {
        if (!cfg.input.empty()) {
            auto in = read_sequence_input(cfg);
            if (!in.scalar) throw UsageError("holder reads a scalar sequence");
            return *in.scalar;
        }
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> v(16);
        for (auto& x : v) x = u(rng);
        return Sequence(std::move(v), 0, 0, cfg.boundary.value_or(Boundary::Periodic));
    }();
    const auto r = holder_exponent(scheme, f0, cfg.levels.value_or(10), cfg.fit_min, cfg.fit_max);
    Json j = io::to_json(r);
    j["seed"] = cfg.seed;
    j["input"] = cfg.input.empty() ? Json("random") : Json(cfg.input);
    print_report(cfg, j, out);
}

void cmd_spectral(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = make_scheme(*cfg.scheme);
    const auto r = cfg.delta.empty() ? best_spectral_radius(scheme)
                                     : iteration_spectral_radius(scheme, DiffOrder::parse(cfg.delta));
    print_report(cfg, io::to_json(r), out);
}

CoeffMask reference_mask(const Json& terms) {
    std::vector<MaskTerm> t;
    for (const auto& term : terms) {
        t.push_back({DiffOrder::parse(term[0].get<std::string>()), term[1].get<int>(),
                     parse_rational(term[2].get<std::string>())});
    }
    return CoeffMask(std::move(t));
}

void cmd_table1(const RunConfig& cfg, std::ostream& out) {
    Json rows = Json::array();
    out << pad("P", 4) << pad("table", 7) << pad("oracle", 8) << "F_P\n";
    std::map<int, CoeffMask> expected;
    for (const auto& row : reference().at("table1")) expected[row.at("points").get<int>()] = reference_mask(row.at("terms"));
    for (int P = 4; P <= 10; ++P) {
        const auto f = uncentered_perturbation(P);
        const bool oracle = (two_point_midpoint() + f).expand() == lagrange_midpoint_coeffs(P, 0).expand();
        const auto it = expected.find(P);
        const std::string table = it == expected.end() ? "-" : (f == it->second ? "PASS" : "FAIL");
        out << pad(std::to_string(P), 4) << pad(table, 7) << pad(oracle ? "PASS" : "FAIL", 8) << f.to_string() << "\n";
        Json r;
        r["points"] = P;
        r["perturbation"] = io::to_json(f);
        r["table"] = table;
        r["oracle"] = oracle ? "PASS" : "FAIL";
        rows.push_back(r);
    }
    out << "\nprinted closed forms against the exact decomposition:\n";
    Json printed = Json::array();
    for (int P = 4; P <= 12; ++P) {
        const auto diff = mask_discrepancies(printed_closed_form_perturbation(P), uncentered_perturbation(P));
        out << pad(std::to_string(P), 4) << (diff.empty() ? "agree" : "differ:");
        for (const auto& t : diff) {
            out << " " << (t.order ? t.order->name() : std::string("f")) << " f[n+" << t.offset
                << "] printed - exact = " << to_string(t.coefficient);
        }
        out << "\n";
        printed.push_back({{"points", P}, {"discrepancies", io::to_json(CoeffMask(diff))}});
    }
    if (!cfg.output.empty()) {
        Json j{{"rows", rows}, {"printed_closed_form", printed}};
        write_artifact(cfg, j.dump(2) + "\n", out);
    }
}

void cmd_table2(const RunConfig& cfg, std::ostream& out) {
    Json rows = Json::array();
    out << pad("P", 4) << pad("l", 4) << pad("exact", 14) << pad("decimal", 11) << pad("reference", 14) << "status\n";
    for (const auto& row : reference().at("table2")) {
        const int P = row.at("points").get<int>();
        const int l = row.at("l").get<int>();
        const std::string ref_text = row.at("value").get<std::string>();
        const Rational exact = linear_contraction_norm(SchemeSpec::uncentered_lagrange(P), DiffOrder::iterated(l));
        const bool pass = exact == parse_rational(ref_text);
        out << pad(std::to_string(P), 4) << pad(std::to_string(l), 4) << pad(to_string(exact), 14)
            << pad(fixed(to_double(exact)), 11) << pad(ref_text, 14) << (pass ? "PASS" : "FAIL") << "\n";
        rows.push_back({{"points", P},
                        {"l", l},
                        {"exact", io::to_json(exact)},
                        {"value", to_double(exact)},
                        {"reference", ref_text},
                        {"status", pass ? "PASS" : "FAIL"}});
    }
    if (!cfg.output.empty()) write_artifact(cfg, rows.dump(2) + "\n", out);
}

void cmd_figure1(const RunConfig& cfg, std::ostream& out) {
    const std::vector<int> points = cfg.points.empty() ? std::vector<int>{9, 10} : cfg.points;
    std::string csv = "points,level,abscissa,value\n";
    Json summary = Json::array();
    for (int P : points) {
        const auto r = figure1_experiment(P);
        for (const auto& s : r.levels) {
            for (std::size_t k = 0; k < s.size(); ++k) {
                csv += std::to_string(P) + ',' + std::to_string(s.level()) + ',' + io::format_double(s.abscissa(k)) +
                       ',' + io::format_double(s[k]) + '\n';
            }
        }
        summary.push_back(io::to_json(r));
    }
    if (cfg.output.empty()) {
        out << csv;
        return;
    }
    write_artifact(cfg, csv, out);
    out << summary.dump(2) << "\n";
}

void cmd_lemma_suite(const RunConfig& cfg, std::ostream& out) {
    const int pairs = cfg.trials.value_or(100000);
    out << pad("p", 4) << pad("pairs", 9);
    for (auto n : PowerMeanProperties::names) out << pad(std::string(n), std::max<std::size_t>(n.size() + 2, 10));
    out << "status\n";
    Json rows = Json::array();
    for (int p = 1; p <= 8; ++p) {
        const auto r = check_power_mean_properties(p, pairs, trial_seed(cfg.seed, static_cast<std::uint64_t>(p)));
        out << pad(std::to_string(p), 4) << pad(std::to_string(pairs), 9);
        Json v;
        for (std::size_t i = 0; i < r.violations.size(); ++i) {
            const auto n = PowerMeanProperties::names[i];
            out << pad(std::to_string(r.violations[i]), std::max<std::size_t>(n.size() + 2, 10));
            v[std::string(n)] = r.violations[i];
        }
        out << (r.ok() ? "PASS" : "FAIL") << "\n";
        rows.push_back({{"p", p}, {"pairs", pairs}, {"violations", v}, {"status", r.ok() ? "PASS" : "FAIL"}});
    }
    if (!cfg.output.empty()) write_artifact(cfg, Json{{"seed", cfg.seed}, {"rows", rows}}.dump(2) + "\n", out);
}

}  // namespace

RunConfig parse_command_line(int argc, const char* const* argv, const char* seed_env, std::string* help) {
    CLI::App app{"Nonlinear interpolatory subdivision: refinement, multiresolution and analysis"};
    app.name("subdiv");
    std::string command;
    std::string config_path;
    std::string scheme, input, output, format, boundary, delta, mode, seed;
    int levels = 0, trials = 0, fit_min = 0, fit_max = 0, steps = 0, window = 0;
    unsigned threads = 0;
    double tolerance = 0.0;
    std::vector<int> points;

    auto* o_cmd = app.add_option("command", command, "One of: subdivide, decompose, reconstruct, threshold, "
                                                     "contraction, holder, spectral, table1, table2, figure1, lemma-suite");
    app.add_option("--config", config_path, "JSON file with any of the options below (flags take precedence)");
    auto* o_scheme = app.add_option("-s,--scheme", scheme, "centered:N, uncentered:N, weno6[:compact], power_p:N, "
                                                           "spherical:{reference,zero,identity}, or a JSON descriptor");
    auto* o_input = app.add_option("-i,--input", input, "Input sequence (csv/json) or pyramid (json/binary)");
    auto* o_output = app.add_option("-o,--output", output, "Output file (default: standard output)");
    auto* o_format = app.add_option("--format", format, "csv, json or binary (default: from the output extension)");
    auto* o_levels = app.add_option("-L,--levels", levels, "Refinement / decomposition levels");
    auto* o_trials = app.add_option("--trials", trials, "Trials for estimators and the lemma suite");
    auto* o_seed = app.add_option("--seed", seed, "Random seed (default: SUBDIV_SEED or a fixed constant)");
    auto* o_tol = app.add_option("--tolerance", tolerance, "Threshold tolerance");
    auto* o_fmin = app.add_option("--fit-min", fit_min, "First level of the Holder fit");
    auto* o_fmax = app.add_option("--fit-max", fit_max, "Last level of the Holder fit (-1: all)");
    auto* o_bnd = app.add_option("--boundary", boundary, "periodic, constant_extend or shrink");
    auto* o_delta = app.add_option("--delta", delta, "Difference operator: d, D, D^l or max(d,D^l)");
    auto* o_mode = app.add_option("--mode", mode, "Contraction estimator: empirical, lipschitz or perturbation");
    auto* o_steps = app.add_option("--steps", steps, "Scheme applications per contraction trial");
    auto* o_window = app.add_option("--window", window, "Samples per estimator input");
    auto* o_threads = app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
    auto* o_points = app.add_option("--points", points, "Stencil sizes for figure1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        if (help) {
            *help = app.help();
            return {};
        }
        throw UsageError("help requested");
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig cfg;
    if (seed_env && *seed_env) cfg.seed = parse_seed(seed_env, "SUBDIV_SEED");
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot open config file '" + config_path + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config file '" + config_path + "': " + e.what());
        }
        apply_config(cfg, j);
    }
    if (o_cmd->count()) cfg.command = command;
    if (o_scheme->count()) cfg.scheme = scheme;
    if (o_input->count()) cfg.input = input;
    if (o_output->count()) cfg.output = output;
    if (o_format->count()) cfg.format = format;
    if (o_levels->count()) cfg.levels = levels;
    if (o_trials->count()) cfg.trials = trials;
    if (o_seed->count()) cfg.seed = parse_seed(seed, "--seed");
    if (o_tol->count()) cfg.tolerance = tolerance;
    if (o_fmin->count()) cfg.fit_min = fit_min;
    if (o_fmax->count()) cfg.fit_max = fit_max;
    if (o_bnd->count()) cfg.boundary = parse_boundary_arg(boundary);
    if (o_delta->count()) cfg.delta = delta;
    if (o_mode->count()) cfg.mode = mode;
    if (o_steps->count()) cfg.steps = steps;
    if (o_window->count()) cfg.window = window;
    if (o_threads->count()) cfg.threads = threads;
    if (o_points->count()) cfg.points = points;
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.command.empty()) throw UsageError("no command given");
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
        throw UsageError("unknown command '" + cfg.command + "'");
    }
    if (needs_scheme(cfg.command) && !cfg.scheme) throw UsageError(cfg.command + " needs --scheme");
    if (cfg.scheme) make_scheme(*cfg.scheme);
    if (needs_input(cfg.command) && cfg.input.empty()) throw UsageError(cfg.command + " needs --input");
    if (!cfg.input.empty() && !fs::is_regular_file(cfg.input)) {
        throw UsageError("input file '" + cfg.input + "' does not exist");
    }
    if (!cfg.output.empty()) {
        const auto parent = fs::absolute(cfg.output).parent_path();
        if (!fs::is_directory(parent)) throw UsageError("output directory '" + parent.string() + "' does not exist");
        if (fs::is_directory(cfg.output)) throw UsageError("output '" + cfg.output + "' is a directory");
    }
    if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json" && cfg.format != "binary") {
        throw UsageError("format must be csv, json or binary");
    }
    if (cfg.mode != "empirical" && cfg.mode != "lipschitz" && cfg.mode != "perturbation") {
        throw UsageError("mode must be empirical, lipschitz or perturbation");
    }
    if (cfg.levels && *cfg.levels < 0) throw UsageError("levels must be non-negative");
    if (cfg.trials && *cfg.trials < 1) throw UsageError("trials must be positive");
    if (cfg.steps < 1) throw UsageError("steps must be positive");
    if (cfg.window < 16) throw UsageError("window must be at least 16");
    if (!(cfg.tolerance >= 0.0)) throw UsageError("tolerance must be non-negative");
    if (!cfg.delta.empty()) {
        try {
            if (cfg.command == "spectral") {
                DiffOrder::parse(cfg.delta);
            } else {
                DeltaSpec::parse(cfg.delta);
            }
        } catch (const Error& e) {
            throw UsageError(std::string("delta: ") + e.what());
        }
    }
}

void run(const RunConfig& cfg, std::ostream& out) {
    const auto& c = cfg.command;
    if (c == "subdivide") cmd_subdivide(cfg, out);
    else if (c == "decompose") cmd_decompose(cfg, out);
    else if (c == "reconstruct") cmd_reconstruct(cfg, out);
    else if (c == "threshold") cmd_threshold(cfg, out);
    else if (c == "contraction") cmd_contraction(cfg, out);
    else if (c == "holder") cmd_holder(cfg, out);
    else if (c == "spectral") cmd_spectral(cfg, out);
    else if (c == "table1") cmd_table1(cfg, out);
    else if (c == "table2") cmd_table2(cfg, out);
    else if (c == "figure1") cmd_figure1(cfg, out);
    else if (c == "lemma-suite") cmd_lemma_suite(cfg, out);
    else throw UsageError("unknown command '" + c + "'");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        std::string help;
        cfg = parse_command_line(argc, argv, std::getenv("SUBDIV_SEED"), &help);
        if (!help.empty()) {
            out << help;
            return 0;
        }
        validate(cfg);
        run(cfg, out);
        out.flush();
        return 0;
    } catch (const UsageError& e) {
        err << Json{{"error", "UsageError"}, {"message", e.what()}, {"command", cfg.command}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        Json rec = io::error_record(e);
        rec["command"] = cfg.command;
        err << rec.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << Json{{"error", "InternalError"}, {"message", e.what()}, {"command", cfg.command}}.dump() << "\n";
        return 1;
    }
}

}  // namespace nlsd::cli
