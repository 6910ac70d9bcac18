#include "mfspin/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfspin/errors.hpp"
#include "mfspin/exact.hpp"
#include "mfspin/experiments.hpp"
#include "mfspin/inversion.hpp"
#include "mfspin/meanfield.hpp"
#include "mfspin/sampling.hpp"

namespace mfspin {

namespace {

using nlohmann::json;

constexpr const char* kCommands[] = {"forward", "exact",   "sample",   "invert",
                                     "study-n", "study-m", "sweep-cw", "sweep-ms"};

struct HelpRequest {
    std::string text;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + path);
    out << content;
    if (!out) throw ResourceError("write failed for " + path);
}

// ---- json <-> config -----------------------------------------------------

json cases_to_json(const std::vector<MsParams>& cases) {
    json arr = json::array();
    for (const MsParams& c : cases)
        arr.push_back(json{{"sizes", c.group_sizes},
                           {"J", c.coupling_matrix},
                           {"h", c.field_vector}});
    return arr;
}

std::vector<MsParams> cases_from_json(const json& arr) {
    if (!arr.is_array()) throw UsageError("config key 'cases': expected an array");
    std::vector<MsParams> cases;
    try {
        for (const json& c : arr) {
            MsParams p;
            p.group_sizes = c.at("sizes").get<std::vector<std::int64_t>>();
            p.coupling_matrix = c.at("J").get<Mat>();
            p.field_vector = c.at("h").get<Vec>();
            cases.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("cases: each entry needs sizes, J, h (") + e.what() + ")");
    }
    return cases;
}

json config_to_json(const RunConfig& cfg) {
    return json{{"command", cfg.command},
                {"model", cfg.model},
                {"N", cfg.n_spins},
                {"J", cfg.coupling},
                {"h", cfg.field},
                {"sizes", cfg.sizes},
                {"J_matrix", cfg.coupling_matrix},
                {"h_vector", cfg.field_vector},
                {"M", cfg.sample_count},
                {"R", cfg.replicates},
                {"seed", cfg.seed},
                {"n_list", cfg.n_list},
                {"m_list", cfg.m_list},
                {"j_list", cfg.j_list},
                {"cases", cases_to_json(cfg.cases)},
                {"out", cfg.output_dir},
                {"stem", cfg.output_stem},
                {"format", cfg.format}};
}

void apply_json_key(RunConfig& cfg, const std::string& key, const json& value) {
    try {
        if (key == "command") cfg.command = value.get<std::string>();
        else if (key == "model") cfg.model = value.get<std::string>();
        else if (key == "N") cfg.n_spins = value.get<std::int64_t>();
        else if (key == "J") cfg.coupling = value.get<double>();
        else if (key == "h") cfg.field = value.get<double>();
        else if (key == "sizes") cfg.sizes = value.get<std::vector<std::int64_t>>();
        else if (key == "J_matrix") cfg.coupling_matrix = value.get<Mat>();
        else if (key == "h_vector") cfg.field_vector = value.get<Vec>();
        else if (key == "M") cfg.sample_count = value.get<std::uint64_t>();
        else if (key == "R") cfg.replicates = value.get<std::uint64_t>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "n_list") cfg.n_list = value.get<std::vector<std::int64_t>>();
        else if (key == "m_list") cfg.m_list = value.get<std::vector<std::uint64_t>>();
        else if (key == "j_list") cfg.j_list = value.get<Vec>();
        else if (key == "cases") cfg.cases = cases_from_json(value);
        else if (key == "out") cfg.output_dir = value.get<std::string>();
        else if (key == "stem") cfg.output_stem = value.get<std::string>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else throw UsageError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
        throw UsageError("config key '" + key + "': " + e.what());
    }
}

// ---- list parsing for CLI flags -------------------------------------------

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw UsageError(what + ": malformed JSON");
    return j;
}

// accepts either a JSON array ("[1,2]") or a comma list ("1,2")
template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
    try {
        if (!text.empty() && text.front() == '[')
            return parse_json_text(text, what).get<std::vector<T>>();
        std::vector<T> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(json::parse(item).get<T>());
        return out;
    } catch (const json::exception&) {
        throw UsageError(what + ": expected a number list");
    }
}

// ---- parse_config ----------------------------------------------------------

bool is_known_command(const std::string& c) {
    for (const char* k : kCommands)
        if (c == k) return true;
    return false;
}

std::string command_listing() {
    std::string s;
    for (const char* k : kCommands) {
        if (!s.empty()) s += ", ";
        s += k;
    }
    return s;
}

} // namespace

RunConfig config_from_json_text(const std::string& text) {
    const json j = parse_json_text(text, "config");
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (!key.empty() && key.front() == '_') continue; // manifest annotations
        apply_json_key(cfg, key, value);
    }
    return cfg;
}

std::string config_to_json_text(const RunConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

RunConfig parse_config(const std::vector<std::string>& args) {
    // --config is honored first so every explicit flag can override it
    RunConfig cfg;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            cfg = config_from_json_text(read_file(args[++i]));
        } else if (args[i].rfind("--config=", 0) == 0) {
            cfg = config_from_json_text(read_file(args[i].substr(9)));
        } else {
            rest.push_back(args[i]);
        }
    }

    CLI::App app{"exact forward and inverse machinery for mean-field spin models"};
    app.name("mfspin");
    app.set_help_flag("--help", "print usage"); // frees -h / --h for the field flag
    std::string command = cfg.command;
    std::string sizes_s, jmat_s, hvec_s, nlist_s, mlist_s, jlist_s, cases_path;
    app.add_option("command", command, "one of: " + command_listing());
    app.add_option("--model", cfg.model, "cw | ms");
    app.add_option("--N", cfg.n_spins, "spin count (cw)");
    app.add_option("--J", cfg.coupling, "coupling (cw)");
    app.add_option("--h", cfg.field, "external field (cw)");
    app.add_option("--sizes", sizes_s, "group sizes (ms), e.g. 1000,1000");
    app.add_option("--J-matrix", jmat_s, "coupling matrix (ms) as JSON, e.g. [[1.2,0.98],[0.98,0.8]]");
    app.add_option("--h-vector", hvec_s, "field vector (ms), e.g. 0.1,0.2");
    app.add_option("--M", cfg.sample_count, "draws per replicate");
    app.add_option("--R", cfg.replicates, "replicates");
    app.add_option("--seed", cfg.seed, "base seed (default fixed, never time-based)");
    app.add_option("--n-list", nlist_s, "system sizes for study-n");
    app.add_option("--m-list", mlist_s, "sample sizes for study-m");
    app.add_option("--j-list", jlist_s, "coupling grid for sweep-cw");
    app.add_option("--cases", cases_path, "JSON file with [{sizes, J, h}, ...] for sweep-ms");
    app.add_option("--out", cfg.output_dir, "output directory (default $MFSPIN_OUTDIR or .)");
    app.add_option("--stem", cfg.output_stem, "output file stem (default: command name)");
    app.add_option("--format", cfg.format, "csv | json");

    std::vector<const char*> argv;
    argv.push_back("mfspin");
    for (const std::string& a : rest) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequest{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (command.empty())
        throw UsageError("no command given; available commands: " + command_listing());
    if (!is_known_command(command))
        throw UsageError("unknown command '" + command + "'; available commands: " +
                         command_listing());
    cfg.command = command;

    if (!sizes_s.empty()) cfg.sizes = parse_list<std::int64_t>(sizes_s, "--sizes");
    if (!jmat_s.empty()) {
        try {
            cfg.coupling_matrix = parse_json_text(jmat_s, "--J-matrix").get<Mat>();
        } catch (const json::exception&) {
            throw UsageError("--J-matrix: expected a JSON matrix");
        }
    }
    if (!hvec_s.empty()) cfg.field_vector = parse_list<double>(hvec_s, "--h-vector");
    if (!nlist_s.empty()) cfg.n_list = parse_list<std::int64_t>(nlist_s, "--n-list");
    if (!mlist_s.empty()) cfg.m_list = parse_list<std::uint64_t>(mlist_s, "--m-list");
    if (!jlist_s.empty()) cfg.j_list = parse_list<double>(jlist_s, "--j-list");
    if (!cases_path.empty())
        cfg.cases = cases_from_json(parse_json_text(read_file(cases_path), "cases file"));

    if (cfg.model != "cw" && cfg.model != "ms")
        throw UsageError("model must be cw or ms, got '" + cfg.model + "'");
    if (cfg.format != "csv" && cfg.format != "json")
        throw UsageError("format must be csv or json, got '" + cfg.format + "'");

    const bool takes_model = cfg.command == "forward" || cfg.command == "exact" ||
                             cfg.command == "sample" || cfg.command == "invert";
    if (takes_model && cfg.model == "ms") {
        if (cfg.sizes.empty()) throw UsageError("missing required key 'sizes' for model ms");
        if (cfg.coupling_matrix.empty())
            throw UsageError("missing required key 'J_matrix' for model ms");
        if (cfg.field_vector.empty())
            throw UsageError("missing required key 'h_vector' for model ms");
    }

    // materialize command defaults so the manifest pins the exact grids
    if (cfg.command == "study-n" && cfg.n_list.empty())
        for (std::int64_t n = 1000; n <= 10000; n += 1000) cfg.n_list.push_back(n);
    if (cfg.command == "study-m" && cfg.m_list.empty())
        cfg.m_list = {100, 1000, 10000, 100000};
    if (cfg.command == "sweep-cw" && cfg.j_list.empty())
        for (int i = 6; i <= 12; ++i) cfg.j_list.push_back(static_cast<double>(i) / 10.0);
    if (cfg.command == "sweep-ms" && cfg.cases.empty()) cfg.cases = canonical_case_list();

    if (cfg.output_dir.empty()) {
        const char* env = std::getenv("MFSPIN_OUTDIR");
        cfg.output_dir = env && *env ? env : ".";
    }
    if (cfg.output_stem.empty()) cfg.output_stem = cfg.command;
    return cfg;
}

// ---- emit ------------------------------------------------------------------

namespace {

MsParams model_params(const RunConfig& cfg) {
    MsParams p = cfg.model == "cw"
                     ? as_multispecies(CwParams{cfg.n_spins, cfg.coupling, cfg.field})
                     : MsParams{cfg.sizes, cfg.coupling_matrix, cfg.field_vector};
    validate(p);
    return p;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

json solution_to_json(const MeanFieldSolution& s) {
    return json{{"magnetization", s.magnetization},
                {"residual", s.residual},
                {"stable", s.stable},
                {"marginal", s.marginal},
                {"jacobian_radius", s.jacobian_radius}};
}

// collector for the files a command writes
struct Outputs {
    const RunConfig& cfg;
    std::vector<std::string> paths;

    std::string stem_path(const std::string& suffix) const {
        return join_path(cfg.output_dir, cfg.output_stem + suffix);
    }
    void emit(const std::string& suffix, const std::string& content) {
        const std::string path = stem_path(suffix);
        write_file(path, content);
        paths.push_back(path);
    }
    void emit_json(const std::string& suffix, const json& j) {
        emit(suffix, j.dump(2) + "\n");
    }
};

void run_forward(const RunConfig& cfg, Outputs& out) {
    const MsParams p = model_params(cfg);
    const FractionVector alpha = fractions_of(p);
    const std::size_t k = p.species_count();
    const std::vector<MeanFieldSolution> sols =
        k == 1 ? solve_cw(p.coupling_matrix[0][0], p.field_vector[0])
               : solve_ms(alpha, p.coupling_matrix, p.field_vector);

    json jsols = json::array();
    std::vector<Mat> chis(sols.size());
    for (std::size_t i = 0; i < sols.size(); ++i) {
        json js = solution_to_json(sols[i]);
        if (sols[i].stable) {
            chis[i] = (k == 1 ? chi_cw(p.coupling_matrix[0][0], sols[i])
                              : chi_ms(alpha, p.coupling_matrix, sols[i]))
                          .chi;
            js["chi"] = chis[i];
        } else {
            js["chi"] = nullptr;
        }
        jsols.push_back(std::move(js));
    }
    out.emit_json(".json", json{{"model", {{"sizes", p.group_sizes},
                                           {"J", p.coupling_matrix},
                                           {"h", p.field_vector}}},
                                {"solutions", jsols}});

    if (cfg.format == "csv") {
        std::string csv;
        for (std::size_t l = 1; l <= k; ++l) csv += "m_" + std::to_string(l) + ",";
        csv += "residual,stable,marginal,jacobian_radius";
        for (std::size_t l = 1; l <= k; ++l)
            for (std::size_t s = 1; s <= k; ++s)
                csv += ",chi_" + std::to_string(l) + std::to_string(s);
        csv += "\n";
        for (std::size_t i = 0; i < sols.size(); ++i) {
            const MeanFieldSolution& s = sols[i];
            for (double m : s.magnetization) csv += fmt17(m) + ",";
            csv += fmt17(s.residual);
            csv += s.stable ? ",1" : ",0";
            csv += s.marginal ? ",1" : ",0";
            csv += "," + fmt17(s.jacobian_radius);
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t c = 0; c < k; ++c)
                    csv += "," + (s.stable ? fmt17(chis[i][l][c]) : std::string());
            csv += "\n";
        }
        out.emit(".csv", csv);
    }
}

json moments_to_json(const ExactMoments& mom) {
    return json{{"mean", mom.mean},
                {"second", mom.second},
                {"finite_size_chi", mom.finite_size_chi}};
}

void run_exact(const RunConfig& cfg, Outputs& out) {
    const MsParams p = model_params(cfg);
    const MagnetizationDistribution dist = ms_distribution(p);
    const ExactMoments mom = exact_moments(dist);
    out.emit_json(".json", moments_to_json(mom));

    if (cfg.format == "csv") {
        const std::size_t k = p.species_count();
        std::string csv;
        for (std::size_t l = 1; l <= k; ++l) csv += "count_" + std::to_string(l) + ",";
        for (std::size_t l = 1; l <= k; ++l) csv += "magnetization_" + std::to_string(l) + ",";
        csv += "probability\n";
        CellCursor cur(dist);
        std::size_t cell = 0;
        do {
            for (std::int64_t c : cur.counts()) csv += std::to_string(c) + ",";
            for (double m : cur.magnetization()) csv += fmt17(m) + ",";
            csv += fmt17(dist.probabilities[cell++]) + "\n";
        } while (cur.advance());
        out.emit(".csv", csv);
    }
}

void run_sample(const RunConfig& cfg, Outputs& out) {
    const MsParams p = model_params(cfg);
    const MagnetizationDistribution dist = ms_distribution(p);
    const std::size_t k = p.species_count();
    const std::vector<std::uint64_t> seeds = replicate_seeds(cfg.seed, cfg.replicates);

    std::string csv = "replicate,draw_index";
    for (std::size_t l = 1; l <= k; ++l) csv += ",m_" + std::to_string(l);
    csv += "\n";
    json jdraws = json::array();
    for (std::size_t r = 0; r < seeds.size(); ++r) {
        SamplerConfig sc;
        sc.sample_count = cfg.sample_count;
        sc.seed = seeds[r];
        const MagnetizationSample s = sample(dist, sc);
        for (std::size_t i = 0; i < s.draw_count(); ++i) {
            if (cfg.format == "csv") {
                csv += std::to_string(r + 1) + "," + std::to_string(i + 1);
                for (std::size_t l = 0; l < k; ++l) csv += "," + fmt17(s.at(i, l));
                csv += "\n";
            } else {
                Vec m(k);
                for (std::size_t l = 0; l < k; ++l) m[l] = s.at(i, l);
                jdraws.push_back(json{{"replicate", r + 1}, {"draw_index", i + 1}, {"m", m}});
            }
        }
    }
    if (cfg.format == "csv")
        out.emit(".csv", csv);
    else
        out.emit_json(".json", json{{"draws", jdraws}});
}

json estimate_to_json(const Estimate& e) {
    return json{{"m_exp", e.m_exp},
                {"chi_exp", e.chi_exp},
                {"j_exp", e.j_exp},
                {"h_exp", e.h_exp},
                {"asymmetry", e.asymmetry}};
}

void run_invert(const RunConfig& cfg, Outputs& out) {
    const MsParams p = model_params(cfg);
    const MagnetizationDistribution dist = ms_distribution(p);
    const EstimationResult res =
        estimate_parameters(dist, cfg.sample_count, cfg.replicates, cfg.seed);
    const std::size_t k = p.species_count();

    json report = estimate_to_json(res.replicate_mean);
    report["replicates"] = res.replicates.size();
    report["sample_count"] = cfg.sample_count;
    double cond = 0.0;
    try {
        cond = infinity_norm(res.replicate_mean.chi_exp) *
               infinity_norm(gauss_jordan_inverse(res.replicate_mean.chi_exp));
        report["chi_condition"] = cond;
    } catch (const NumericalError&) {
        report["chi_condition"] = nullptr;
    }
    report["replicate_std"] =
        res.replicates.size() >= 2 ? estimate_to_json(res.replicate_std) : json(nullptr);
    out.emit_json(".json", report);

    if (cfg.format == "csv") {
        std::string csv = "replicate";
        for (std::size_t l = 1; l <= k; ++l) csv += ",m_exp_" + std::to_string(l);
        for (std::size_t l = 1; l <= k; ++l)
            for (std::size_t s = l; s <= k; ++s)
                csv += ",chi_exp_" + std::to_string(l) + std::to_string(s);
        for (std::size_t l = 1; l <= k; ++l)
            for (std::size_t s = l; s <= k; ++s)
                csv += ",j_exp_" + std::to_string(l) + std::to_string(s);
        for (std::size_t l = 1; l <= k; ++l) csv += ",h_exp_" + std::to_string(l);
        csv += ",asymmetry\n";
        for (std::size_t r = 0; r < res.replicates.size(); ++r) {
            const Estimate& e = res.replicates[r];
            csv += std::to_string(r + 1);
            for (std::size_t l = 0; l < k; ++l) csv += "," + fmt17(e.m_exp[l]);
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t s = l; s < k; ++s) csv += "," + fmt17(e.chi_exp[l][s]);
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t s = l; s < k; ++s) csv += "," + fmt17(e.j_exp[l][s]);
            for (std::size_t l = 0; l < k; ++l) csv += "," + fmt17(e.h_exp[l]);
            csv += "," + fmt17(e.asymmetry) + "\n";
        }
        out.emit(".csv", csv);
    }
}

json fit_to_json(const std::optional<PowerLawFit>& fit) {
    if (!fit) return nullptr;
    return json{{"amplitude", fit->amplitude},
                {"exponent", fit->exponent},
                {"r_squared", fit->r_squared}};
}

void run_study_n(const RunConfig& cfg, Outputs& out) {
    if (cfg.model != "cw") throw UsageError("study-n runs on the cw model");
    const SizeScalingStudy study = size_scaling_study(cfg.coupling, cfg.field, cfg.n_list);
    std::string csv = "N,m_N,chi_N,abs_err_m,abs_err_chi\n";
    for (const SizeScalingRow& r : study.rows)
        csv += std::to_string(r.n) + "," + fmt17(r.m_n) + "," + fmt17(r.chi_n) + "," +
               fmt17(r.abs_err_m) + "," + fmt17(r.abs_err_chi) + "\n";
    out.emit(".csv", csv);
    out.emit_json(".json", json{{"m_limit", study.m_limit},
                                {"chi_limit", study.chi_limit},
                                {"m_fit", fit_to_json(study.m_fit)},
                                {"chi_fit", fit_to_json(study.chi_fit)}});
}

void run_study_m(const RunConfig& cfg, Outputs& out) {
    if (cfg.model != "cw") throw UsageError("study-m runs on the cw model");
    const SampleScalingStudy study = sample_scaling_study(
        CwParams{cfg.n_spins, cfg.coupling, cfg.field}, cfg.m_list, cfg.replicates, cfg.seed);
    std::string csv = "M,std_m_exp,std_chi_exp\n";
    for (const SampleScalingRow& r : study.rows)
        csv += std::to_string(r.sample_count) + "," + fmt17(r.std_m_exp) + "," +
               fmt17(r.std_chi_exp) + "\n";
    out.emit(".csv", csv);
    out.emit_json(".json", json{{"m_fit", fit_to_json(study.m_fit)},
                                {"chi_fit", fit_to_json(study.chi_fit)}});
}

void run_sweep_cw(const RunConfig& cfg, Outputs& out) {
    const std::vector<SweepCase> cases = cw_recovery_sweep(
        cfg.j_list, cfg.field, cfg.n_spins, cfg.sample_count, cfg.replicates, cfg.seed);
    std::string csv =
        "case_id,J,h,J_exp,h_exp,J_exp_std,h_exp_std,j_distance,h_distance,max_pct_error\n";
    for (const SweepCase& c : cases) {
        const bool has_std = c.result.replicates.size() >= 2;
        csv += std::to_string(c.case_id) + "," + fmt17(c.params.coupling_matrix[0][0]) + "," +
               fmt17(c.params.field_vector[0]) + "," +
               fmt17(c.result.replicate_mean.j_exp[0][0]) + "," +
               fmt17(c.result.replicate_mean.h_exp[0]) + "," +
               (has_std ? fmt17(c.result.replicate_std.j_exp[0][0]) : std::string()) + "," +
               (has_std ? fmt17(c.result.replicate_std.h_exp[0]) : std::string()) + "," +
               fmt17(c.j_distance) + "," + fmt17(c.h_distance) + "," +
               fmt17(c.max_pct_error) + "\n";
    }
    out.emit(".csv", csv);
}

void run_sweep_ms(const RunConfig& cfg, Outputs& out) {
    const std::size_t k = cfg.cases.front().species_count();
    for (const MsParams& c : cfg.cases)
        if (c.species_count() != k)
            throw UsageError("all sweep-ms cases must have the same species count");
    const std::vector<SweepCase> cases =
        ms_case_sweep(cfg.cases, cfg.sample_count, cfg.replicates, cfg.seed);

    const auto upper = [&](const std::string& prefix) {
        std::string s;
        for (std::size_t l = 1; l <= k; ++l)
            for (std::size_t c = l; c <= k; ++c)
                s += "," + prefix + std::to_string(l) + std::to_string(c);
        return s;
    };
    const auto per_group = [&](const std::string& prefix) {
        std::string s;
        for (std::size_t l = 1; l <= k; ++l) s += "," + prefix + std::to_string(l);
        return s;
    };
    std::string csv = "case_id" + upper("J_") + per_group("h_") + upper("J_exp_") +
                      per_group("h_exp_") + upper("J_exp_std_") + per_group("h_exp_std_") +
                      ",asymmetry,j_distance,h_distance,max_pct_error\n";
    for (const SweepCase& c : cases) {
        const bool has_std = c.result.replicates.size() >= 2;
        csv += std::to_string(c.case_id);
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t s = l; s < k; ++s)
                csv += "," + fmt17(c.params.coupling_matrix[l][s]);
        for (std::size_t l = 0; l < k; ++l) csv += "," + fmt17(c.params.field_vector[l]);
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t s = l; s < k; ++s)
                csv += "," + fmt17(c.result.replicate_mean.j_exp[l][s]);
        for (std::size_t l = 0; l < k; ++l)
            csv += "," + fmt17(c.result.replicate_mean.h_exp[l]);
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t s = l; s < k; ++s)
                csv += "," + (has_std ? fmt17(c.result.replicate_std.j_exp[l][s])
                                      : std::string());
        for (std::size_t l = 0; l < k; ++l)
            csv += "," + (has_std ? fmt17(c.result.replicate_std.h_exp[l]) : std::string());
        csv += "," + fmt17(c.result.replicate_mean.asymmetry) + "," + fmt17(c.j_distance) +
               "," + fmt17(c.h_distance) + "," + fmt17(c.max_pct_error) + "\n";
    }
    out.emit(".csv", csv);
}

} // namespace

std::vector<std::string> run_and_emit(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw ResourceError("cannot create output directory " + cfg.output_dir);

    Outputs out{cfg, {}};
    if (cfg.command == "forward") run_forward(cfg, out);
    else if (cfg.command == "exact") run_exact(cfg, out);
    else if (cfg.command == "sample") run_sample(cfg, out);
    else if (cfg.command == "invert") run_invert(cfg, out);
    else if (cfg.command == "study-n") run_study_n(cfg, out);
    else if (cfg.command == "study-m") run_study_m(cfg, out);
    else if (cfg.command == "sweep-cw") run_sweep_cw(cfg, out);
    else if (cfg.command == "sweep-ms") run_sweep_ms(cfg, out);
    else throw UsageError("unknown command '" + cfg.command + "'");

    json manifest = config_to_json(cfg);
    manifest["_wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["_outputs"] = out.paths;
    const std::string mpath = out.stem_path("_manifest.json");
    write_file(mpath, manifest.dump(2) + "\n");
    out.paths.push_back(mpath);
    return out.paths;
}

int cli_main(int argc, const char* const* argv) {
    try {
        const RunConfig cfg = parse_config(std::vector<std::string>(argv + 1, argv + argc));
        for (const std::string& path : run_and_emit(cfg)) std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const HelpRequest& h) {
        std::cout << h.text;
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace mfspin
