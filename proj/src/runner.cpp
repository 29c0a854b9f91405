#include "bargmann/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bargmann/oracle.hpp"

namespace bargmann {
namespace runner {

namespace {

std::vector<MixedState> parse_states_list(const json& raw, std::size_t min_count) {
    if (!raw.is_array() || raw.size() < min_count)
        throw config_error("\"states\" must list at least " + std::to_string(min_count) +
                           " state specs");
    std::vector<MixedState> states;
    states.reserve(raw.size());
    for (const auto& spec : raw) states.push_back(parse_state_spec(spec));
    const int d = states.front().layout().num_internal;
    for (const auto& s : states)
        if (s.layout().num_internal != d || s.layout().num_systems != 1)
            throw config_error("states must be single-system with one shared internal dimension");
    return states;
}

EstimationMode parse_mode(const json& doc, std::uint64_t seed) {
    if (!doc.contains("mode")) return EstimationMode::exact();
    const json& m = doc.at("mode");
    const std::string kind = m.value("kind", "exact");
    if (kind == "exact") return EstimationMode::exact();
    if (kind != "sampled") throw config_error("mode.kind must be \"exact\" or \"sampled\"");
    const bool has_n = m.contains("N");
    const bool has_bound = m.contains("epsilon") || m.contains("delta");
    if (has_n == has_bound)
        throw config_error("sampled mode takes exactly one of N or (epsilon, delta)");
    if (has_n) return EstimationMode::sampled(m.at("N").get<long>(), seed);
    if (!m.contains("epsilon") || !m.contains("delta"))
        throw config_error("sampled mode with a bound needs both epsilon and delta");
    return EstimationMode::sampled_with_bound(m.at("epsilon").get<double>(),
                                              m.at("delta").get<double>(), seed);
}

double validation_tolerance(const ExperimentConfig& cfg, int order) {
    if (cfg.tolerance) return *cfg.tolerance;
    if (cfg.mode.is_exact()) return 1e-8;
    // per-bin Hoeffding epsilon propagated linearly through the DFT
    return effective_epsilon(cfg.mode) * order;
}

json real_or_pair(const cplx& z) {
    if (z.imag() == 0.0) return z.real();
    return complex_to_json(z);
}

struct Validation {
    json protocol_value;
    json oracle_value;
    double abs_error = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

struct ExperimentOutput {
    json result;
    std::optional<Validation> validation;
    std::optional<std::pair<std::string, std::string>> side_file;  // path, content
};

json validation_to_json(const Validation& v) {
    return json{{"protocol_value", v.protocol_value},
                {"oracle_value", v.oracle_value},
                {"abs_error", v.abs_error},
                {"tolerance", v.tolerance},
                {"passed", v.passed}};
}

Validation make_validation(const cplx& protocol_value, const cplx& oracle_value,
                           double tolerance) {
    Validation v;
    v.protocol_value = real_or_pair(protocol_value);
    v.oracle_value = real_or_pair(oracle_value);
    v.abs_error = std::abs(protocol_value - oracle_value);
    v.tolerance = tolerance;
    v.passed = v.abs_error <= tolerance;
    return v;
}

ExperimentOutput run_trace(const ExperimentConfig& cfg) {
    const auto states = parse_states_list(cfg.raw.at("states"), 2);
    const auto est = estimate_multivariate_trace(states, cfg.mode);
    ExperimentOutput out;
    out.result = invariant_estimate_to_json(est);
    if (cfg.validate) {
        const cplx truth = oracle::direct_multivariate_trace(states);
        out.validation = make_validation(est.delta, truth,
                                         validation_tolerance(cfg, est.num_states));
    }
    return out;
}

ExperimentOutput run_hom(const ExperimentConfig& cfg) {
    const auto states = parse_states_list(cfg.raw.at("states"), 2);
    if (states.size() != 2) throw config_error("hom takes exactly two states");
    const double overlap = hom_overlap(states[0], states[1], cfg.mode);
    const auto est = estimate_multivariate_trace(states, cfg.mode);
    ExperimentOutput out;
    out.result = json{{"overlap", overlap},
                      {"P0", est.P[0]},
                      {"estimate", invariant_estimate_to_json(est)}};
    if (cfg.validate) {
        const cplx truth = oracle::direct_multivariate_trace(states);
        out.validation =
            make_validation(overlap, truth.real(), validation_tolerance(cfg, 2));
    }
    return out;
}

ExperimentOutput run_suppression(const ExperimentConfig& cfg) {
    const auto states = parse_states_list(cfg.raw.at("states"), 2);
    const double sym_tol = cfg.raw.value("symmetry_tolerance", 1e-10);
    const auto est = estimate_multivariate_trace(states, cfg.mode);
    double worst = 0.0;
    for (const auto& x : est.X) worst = std::max(worst, std::abs(x - cplx{1.0, 0.0}));
    ExperimentOutput out;
    out.result = json{{"is_symmetric", std::abs(est.P[0] - 1.0) <= sym_tol},
                      {"P0", est.P[0]},
                      {"worst_Xk_deviation", worst},
                      {"estimate", invariant_estimate_to_json(est)}};
    if (cfg.validate) {
        const auto report =
            oracle::certify_cyclic_symmetry(tensor_product(states), sym_tol);
        out.validation = make_validation(est.P[0], report.p0,
                                         validation_tolerance(cfg, est.num_states));
        out.validation->oracle_value =
            json{{"P0", report.p0},
                 {"is_symmetric", report.is_symmetric},
                 {"worst_Xk_deviation", report.worst_Xk_deviation}};
    }
    return out;
}

ExperimentOutput run_renyi(const ExperimentConfig& cfg) {
    const MixedState rho = parse_state_spec(cfg.raw.at("state"));
    const int alpha = cfg.raw.at("alpha").get<int>();
    const double entropy = renyi_entropy(rho, alpha, cfg.mode);
    const auto est =
        estimate_multivariate_trace(std::vector<MixedState>(alpha, rho), cfg.mode);
    ExperimentOutput out;
    out.result = json{{"alpha", alpha},
                      {"entropy", entropy},
                      {"estimate", invariant_estimate_to_json(est)}};
    if (cfg.validate) {
        const cplx truth =
            oracle::direct_multivariate_trace(std::vector<MixedState>(alpha, rho));
        const double oracle_entropy = std::log(truth.real()) / (1.0 - alpha);
        out.validation =
            make_validation(entropy, oracle_entropy, validation_tolerance(cfg, alpha));
    }
    return out;
}

ExperimentOutput run_spectrum(const ExperimentConfig& cfg) {
    const MixedState rho = parse_state_spec(cfg.raw.at("state"));
    const int rank_bound = cfg.raw.at("rank_bound").get<int>();
    const auto report = spectrum_from_traces(rho, rank_bound, cfg.mode);
    ExperimentOutput out;
    out.result = spectrum_report_to_json(report);
    if (cfg.validate) {
        std::vector<double> traces(rank_bound, 1.0);
        for (int k = 2; k <= rank_bound; ++k)
            traces[k - 1] =
                oracle::direct_multivariate_trace(std::vector<MixedState>(k, rho)).real();
        const auto truth = spectrum_from_power_traces(std::move(traces));
        double err = 0.0;
        for (int i = 0; i < rank_bound; ++i)
            err = std::max(err, std::abs(report.eigenvalues[i] - truth.eigenvalues[i]));
        Validation v;
        v.protocol_value = out.result.at("eigenvalues");
        v.oracle_value = spectrum_report_to_json(truth).at("eigenvalues");
        v.abs_error = err;
        v.tolerance = validation_tolerance(cfg, rank_bound);
        v.passed = err <= v.tolerance;
        out.validation = v;
    }
    return out;
}

std::string format_csv_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

ExperimentOutput run_kernel(const ExperimentConfig& cfg) {
    const auto states = parse_states_list(cfg.raw.at("states"), 2);
    const int n = static_cast<int>(states.size());
    std::vector<std::string> ids;
    if (cfg.raw.contains("ids")) {
        ids = cfg.raw.at("ids").get<std::vector<std::string>>();
        if (static_cast<int>(ids.size()) != n)
            throw config_error("ids length must match states");
    } else {
        for (int i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
    }

    const auto kr = kernel_matrix(states, cfg.mode);
    json K = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(kr.K(i, j));
        K.push_back(std::move(row));
    }
    json seeds = json::array();
    for (const auto& [i, j, s] : kr.pair_seeds)
        seeds.push_back(json{{"i", i}, {"j", j}, {"seed", s}});

    std::ostringstream csv;
    csv << "id";
    for (const auto& id : ids) csv << "," << id;
    csv << "\n";
    for (int i = 0; i < n; ++i) {
        csv << ids[i];
        for (int j = 0; j < n; ++j) csv << "," << format_csv_double(kr.K(i, j));
        csv << "\n";
    }

    std::string csv_path = cfg.out_path;
    if (csv_path.size() > 5 && csv_path.ends_with(".json"))
        csv_path.resize(csv_path.size() - 5);
    csv_path += ".csv";

    ExperimentOutput out;
    out.result = json{{"ids", ids}, {"K", std::move(K)}, {"pair_seeds", std::move(seeds)}};
    out.side_file = {std::move(csv_path), csv.str()};
    if (cfg.validate) {
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double truth =
                    oracle::direct_multivariate_trace({states[i], states[j]}).real();
                err = std::max(err, std::abs(kr.K(i, j) - truth));
            }
        Validation v;
        v.protocol_value = out.result.at("K");
        v.oracle_value = "pairwise direct multivariate traces";
        v.abs_error = err;
        v.tolerance = validation_tolerance(cfg, 2);
        v.passed = err <= v.tolerance;
        out.validation = v;
    }
    return out;
}

std::vector<cplx> parse_points(const json& raw) {
    std::vector<cplx> points;
    if (raw.contains("points")) {
        points = complex_vector_from_json(raw.at("points"));
    } else if (raw.contains("grid")) {
        const auto& g = raw.at("grid");
        const double lo = g.at("min").get<double>();
        const double hi = g.at("max").get<double>();
        const double step = g.at("step").get<double>();
        if (step <= 0.0 || hi < lo) throw config_error("bad quasiprob grid");
        for (double re = lo; re <= hi + step / 2; re += step)
            for (double im = lo; im <= hi + step / 2; im += step)
                points.emplace_back(re, im);
    } else {
        throw config_error("quasiprob needs \"points\" or \"grid\"");
    }
    if (points.empty()) throw config_error("quasiprob: no evaluation points");
    return points;
}

EstimationMode point_mode(const EstimationMode& mode, std::uint64_t stream) {
    EstimationMode m = mode;
    if (!m.is_exact()) m.seed = derive_stream_seed(mode.seed, stream);
    return m;
}

ExperimentOutput run_quasiprob(const ExperimentConfig& cfg) {
    const MixedState rho = parse_state_spec(cfg.raw.at("state"));
    const std::string quasi = cfg.raw.at("quasi").get<std::string>();
    ExperimentOutput out;

    if (quasi == "husimi" || quasi == "wigner") {
        if (rho.layout().num_internal != 1)
            throw config_error("quasiprob " + quasi + " runs on single-internal-mode states");
        const auto points = parse_points(cfg.raw);
        json results = json::array();
        double worst_err = 0.0;
        json oracle_values = json::array();
        for (std::size_t idx = 0; idx < points.size(); ++idx) {
            const cplx alpha = points[idx];
            const int cutoff = cfg.raw.contains("cutoff")
                                   ? cfg.raw.at("cutoff").get<int>()
                                   : suggest_coherent_cutoff({alpha}, 1e-8);
            double value = 0.0;
            double truth = 0.0;
            if (quasi == "husimi") {
                value = husimi_q(rho, {alpha}, cutoff, point_mode(cfg.mode, idx));
                if (cfg.validate) {
                    const auto coh = truncated_coherent_state({alpha}, cutoff, 1e-7);
                    truth = oracle::direct_multivariate_trace(
                                {rho, MixedState::from_pure(coh.state)})
                                .real() /
                            std::numbers::pi;
                }
            } else {
                const int n_max = cfg.raw.value("n_max", -1);
                const double series_tol = cfg.raw.value("series_tol", 1e-6);
                value = wigner_point(rho, {alpha}, n_max, cutoff,
                                     point_mode(cfg.mode, idx), series_tol);
                if (cfg.validate) {
                    int n_top = n_max;
                    if (n_top < 0)
                        for (const auto& comp : rho.components)
                            n_top = std::max(n_top, comp.state.max_photons());
                    double acc = 0.0;
                    for (int nn = 0; nn <= n_top; ++nn) {
                        const auto dn = displaced_fock_state(alpha, nn, cutoff);
                        const double t = oracle::direct_multivariate_trace(
                                             {rho, MixedState::from_pure(dn.state)})
                                             .real();
                        acc += (nn % 2 == 0) ? t : -t;
                    }
                    truth = 2.0 * acc / std::numbers::pi;
                }
            }
            results.push_back(json{{"alpha_re", alpha.real()},
                                   {"alpha_im", alpha.imag()},
                                   {"value", value}});
            if (cfg.validate) {
                oracle_values.push_back(truth);
                worst_err = std::max(worst_err, std::abs(value - truth));
            }
        }
        out.result = json{{"quasi", quasi}, {"points", std::move(results)}};
        if (cfg.validate) {
            Validation v;
            v.protocol_value = out.result.at("points");
            v.oracle_value = std::move(oracle_values);
            v.abs_error = worst_err;
            v.tolerance = validation_tolerance(cfg, 2);
            v.passed = worst_err <= v.tolerance;
            out.validation = v;
        }
        return out;
    }

    if (quasi == "kirkwood_dirac") {
        const PureState a = parse_pure_state_spec(cfg.raw.at("a_state"));
        const PureState b = parse_pure_state_spec(cfg.raw.at("b_state"));
        const cplx value = kirkwood_dirac(rho, a, b, cfg.mode);
        out.result = json{{"quasi", quasi}, {"value", complex_to_json(value)}};
        if (cfg.validate) {
            const cplx truth = oracle::direct_multivariate_trace(
                {MixedState::from_pure(a), rho, MixedState::from_pure(b)});
            out.validation = make_validation(value, truth, validation_tolerance(cfg, 3));
        }
        return out;
    }

    if (quasi == "positive_p") {
        const auto alpha = complex_vector_from_json(cfg.raw.at("alpha"));
        const auto beta = complex_vector_from_json(cfg.raw.at("beta"));
        const int cutoff =
            cfg.raw.contains("cutoff")
                ? cfg.raw.at("cutoff").get<int>()
                : std::max(suggest_coherent_cutoff(alpha, 1e-8),
                           suggest_coherent_cutoff(beta, 1e-8));
        const cplx value = positive_p(rho, alpha, beta, cutoff, cfg.mode);
        out.result = json{{"quasi", quasi},
                          {"alpha", cfg.raw.at("alpha")},
                          {"beta", cfg.raw.at("beta")},
                          {"value", complex_to_json(value)}};
        if (cfg.validate) {
            const auto ca = truncated_coherent_state(alpha, cutoff, 1e-7);
            const auto cb = truncated_coherent_state(beta, cutoff, 1e-7);
            const cplx truth =
                oracle::direct_multivariate_trace({MixedState::from_pure(ca.state), rho,
                                                   MixedState::from_pure(cb.state)}) /
                (std::numbers::pi * std::numbers::pi);
            out.validation = make_validation(value, truth, validation_tolerance(cfg, 3));
        }
        return out;
    }

    throw config_error("unknown quasiprob kind: " + quasi);
}

ExperimentOutput dispatch(const ExperimentConfig& cfg) {
    if (cfg.kind == "trace") return run_trace(cfg);
    if (cfg.kind == "hom") return run_hom(cfg);
    if (cfg.kind == "suppression") return run_suppression(cfg);
    if (cfg.kind == "renyi") return run_renyi(cfg);
    if (cfg.kind == "spectrum") return run_spectrum(cfg);
    if (cfg.kind == "kernel") return run_kernel(cfg);
    if (cfg.kind == "quasiprob") return run_quasiprob(cfg);
    throw config_error("unknown experiment kind: " + cfg.kind);
}

std::string config_hash_hex(const json& raw) {
    json hashed = raw;
    hashed.erase("out");  // where a result lands does not change what it is
    std::ostringstream os;
    os << std::hex << fnv1a64(hashed.dump());
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace

ExperimentConfig parse_config(json doc, const Overrides& overrides,
                              const std::string& default_stem) {
    if (!doc.is_object()) throw config_error("config must be a JSON object");
    ExperimentConfig cfg;
    if (!doc.contains("experiment"))
        throw config_error("config needs an \"experiment\" kind");
    cfg.kind = doc.at("experiment").get<std::string>();

    if (overrides.seed) doc["seed"] = *overrides.seed;
    if (overrides.out) doc["out"] = *overrides.out;
    if (overrides.tolerance) doc["tolerance"] = *overrides.tolerance;
    if (overrides.force_validate) doc["validate"] = true;

    cfg.seed = doc.value("seed", 0ULL);
    cfg.mode = parse_mode(doc, cfg.seed);
    cfg.validate = doc.value("validate", false);
    if (doc.contains("tolerance")) cfg.tolerance = doc.at("tolerance").get<double>();
    cfg.out_path = doc.value("out", default_stem + ".result.json");
    cfg.raw = std::move(doc);
    return cfg;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentOutput output = dispatch(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json document{{"manifest", json{{"config_hash", config_hash_hex(cfg.raw)},
                                    {"seed", cfg.seed},
                                    {"tool_version", kToolVersion},
                                    {"wall_time_s", wall}}},
                  {"result", std::move(output.result)}};
    if (output.validation)
        document["validation"] = validation_to_json(*output.validation);

    write_text(cfg.out_path, document.dump(2) + "\n");
    if (output.side_file) write_text(output.side_file->first, output.side_file->second);

    RunOutcome outcome;
    outcome.document = std::move(document);
    outcome.out_path = cfg.out_path;
    if (output.validation && !output.validation->passed) {
        outcome.status = kStatusValidation;
        outcome.message = "validation FAILED: abs_error " +
                          std::to_string(output.validation->abs_error) + " > tolerance " +
                          std::to_string(output.validation->tolerance);
    } else {
        outcome.message = "wrote " + cfg.out_path;
    }
    return outcome;
}

RunOutcome run_sweep(json doc, const Overrides& overrides,
                     const std::string& default_stem, const std::string& axis,
                     const std::vector<double>& values) {
    RunOutcome outcome;
    if (values.empty()) {
        outcome.status = kStatusUsage;
        outcome.message = "sweep needs at least one axis value";
        return outcome;
    }
    if (axis.empty() || axis.front() != '/') {
        outcome.status = kStatusUsage;
        outcome.message = "sweep axis must be a JSON pointer, e.g. /mode/N";
        return outcome;
    }
    const std::string kind = doc.value("experiment", "");
    if (kind != "trace" && kind != "hom") {
        outcome.status = kStatusUsage;
        outcome.message = "sweep supports trace and hom experiments";
        return outcome;
    }

    const std::string csv_path =
        overrides.out ? *overrides.out : default_stem + ".sweep.csv";
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) {
        outcome.status = kStatusError;
        outcome.message = "cannot open " + csv_path;
        return outcome;
    }
    csv << "axis,estimate_re,estimate_im,oracle_re,oracle_im,abs_error\n";
    csv.flush();

    const json::json_pointer ptr{axis};
    Overrides point_overrides = overrides;
    point_overrides.out.reset();
    for (double v : values) {
        try {
            json patched = doc;
            if (std::floor(v) == v && std::abs(v) < 9.0e15)
                patched[ptr] = static_cast<std::int64_t>(v);
            else
                patched[ptr] = v;
            const ExperimentConfig cfg = parse_config(patched, point_overrides, default_stem);

            const auto states = parse_states_list(cfg.raw.at("states"), 2);
            cplx estimate, truth;
            if (kind == "trace") {
                estimate = estimate_multivariate_trace(states, cfg.mode).delta;
                truth = oracle::direct_multivariate_trace(states);
            } else {
                if (states.size() != 2) throw config_error("hom takes exactly two states");
                estimate = hom_overlap(states[0], states[1], cfg.mode);
                truth = oracle::direct_multivariate_trace(states).real();
            }
            csv << format_csv_double(v) << ',' << format_csv_double(estimate.real())
                << ',' << format_csv_double(estimate.imag()) << ','
                << format_csv_double(truth.real()) << ','
                << format_csv_double(truth.imag()) << ','
                << format_csv_double(std::abs(estimate - truth)) << "\n";
            csv.flush();
        } catch (const std::exception& e) {
            outcome.status = std::max(outcome.status, status_for_exception(e));
            outcome.message += std::string("point ") + format_csv_double(v) +
                               " failed: " + e.what() + "\n";
        }
    }
    outcome.out_path = csv_path;
    if (outcome.message.empty()) outcome.message = "wrote " + csv_path;
    return outcome;
}

int status_for_exception(const std::exception& e) {
    if (dynamic_cast<const capacity_error*>(&e)) return kStatusCapacity;
    if (dynamic_cast<const config_error*>(&e)) return kStatusUsage;
    if (dynamic_cast<const json::exception*>(&e)) return kStatusUsage;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return kStatusUsage;
    return kStatusError;
}

bool apply_sector_cap_env() {
    const char* value = std::getenv(kSectorCapEnvVar);
    if (value == nullptr) return true;
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(value, &end, 10);
    if (end == value || *end != '\0' || cap == 0) return false;
    set_max_sector_size(cap);
    return true;
}

}  // namespace runner
}  // namespace bargmann
