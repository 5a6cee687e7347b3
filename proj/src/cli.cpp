#include "scartower/cli.hpp"

#include "scartower/analytics.hpp"
#include "scartower/arovas.hpp"
#include "scartower/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

namespace scartower {

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct RunConfig {
    std::string command;
    std::string model = "aklt";
    int L = 4;
    double w = 0.5;
    std::optional<int> n;
    std::optional<int> ancillas;
    int shots = 1;
    std::uint64_t seed = 0;
    std::string boundary;
    Couplings couplings;
    std::string method;
    std::string mode;
    std::string out_path, state_out, mps_out, csv_path, mpu_file, builtin;
    double delta = 0.2;
    double alpha = 0.05;
    int max_rounds = 10000;
    int seeds = 1;
    int d = 2;
    bool exhaustive = false;
    std::size_t max_amplitudes = 0;

    Json echo() const {
        Json j = {{"command", command}, {"seed", seed}};
        auto put = [&](const char* k, const Json& v) { j[k] = v; };
        if (command == "mpu-check") {
            put("builtin", builtin);
            put("file", mpu_file);
        } else if (command == "translate") {
            put("L", L);
            put("d", d);
            put("mode", mode);
            put("exhaustive", exhaustive);
        } else if (command == "arovas") {
            put("L", L);
            put("alpha", alpha);
            put("max_rounds", max_rounds);
            put("seeds", seeds);
        } else {
            put("model", model);
            put("L", L);
            put("boundary", boundary.empty() ? Json(nullptr) : Json(boundary));
            put("couplings", {{"lambda", couplings.lambda}, {"h", couplings.h}, {"J", couplings.J}});
            if (command != "verify") put("w", w);
            if (n) put("n", *n);
            if (command == "distribution") {
                put("method", method);
                put("delta", delta);
            }
            if (command == "measure-charge" || command == "measure-momentum") {
                put("shots", shots);
                if (ancillas) put("ancillas", *ancillas);
            }
            if (command == "measure-momentum") put("method", method);
        }
        if (max_amplitudes) put("max_amplitudes", max_amplitudes);
        return j;
    }
};

ModelSpec model_of(const RunConfig& c) {
    try {
        if (c.boundary.empty()) return make_model(c.model, c.couplings);
        return make_model(c.model, c.couplings, parse_boundary(c.boundary));
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

double json_number(double x) { return std::isfinite(x) ? x : 0.0; }

Json sector_json(const std::vector<SectorWeight>& ws) {
    Json a = Json::array();
    for (const auto& s : ws) a.push_back({{"charge", s.charge}, {"weight", s.weight}});
    return a;
}

int worker_count() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SCARTOWER_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) n = v;
    }
    return n;
}

// Resource state, optionally projected onto tower member n.
StateVector chosen_state(const ModelSpec& model, const RunConfig& c, Json& info) {
    StateVector s = resource_state(model, c.L, c.w);
    if (!c.n) return s;
    const double target = model.base_charge(c.L) + *c.n * model.q;
    Projection p = project_charge(s, model, target);
    info["tower_probability"] = p.probability;
    if (p.empty) throw NumericalError("tower member n = " + std::to_string(*c.n) + " has zero weight in the resource state");
    return p.post_state;
}

Json cmd_prepare(const RunConfig& c) {
    const ModelSpec model = model_of(c);
    Json r;
    MPS mps = build_resource_mps(model, c.L, c.w);
    r["bond_dimension"] = mps.max_bond();
    StateVector s = chosen_state(model, c, r);
    r["sector_weights"] = sector_json(charge_sector_weights(model, s));
    EnergyCheck e = hamiltonian_residual(model, s);
    r["energy"] = e.energy;
    r["residual"] = e.residual;
    r["amplitudes"] = s.size();
    if (!c.state_out.empty()) {
        write_json_file(c.state_out, state_to_json(s));
        r["state_file"] = c.state_out;
    }
    if (!c.mps_out.empty()) {
        write_json_file(c.mps_out, mps_to_json(mps));
        r["mps_file"] = c.mps_out;
    }
    return r;
}

Json cmd_distribution(const RunConfig& c) {
    const ModelSpec model = model_of(c);
    DistributionSpec d;
    if (c.method == "analytic") d = pn_analytic(model, c.L, c.w);
    else if (c.method == "transfer") d = pn_transfer(model, c.L, c.w);
    else if (c.method == "brute") d = pn_brute(model, c.L, c.w);
    else throw UsageError("unknown method '" + c.method + "' (valid: analytic, transfer, brute)");
    Json r;
    r["method"] = d.method;
    r["p"] = d.p;
    GaussianFit an = gaussian_params_analytic(model, c.L, c.w);
    r["analytic"] = {{"n0", an.n0}, {"delta", an.delta}};
    try {
        GaussianFit f = fit_gaussian(d);
        r["fitted"] = {{"n0", f.n0}, {"delta", f.delta}, {"rms_residual", f.goodness}};
    } catch (const Error& e) {
        r["fitted"] = {{"error", e.what()}};
    }
    try {
        ToleranceReport t = tolerance_probability(d, an.n0, c.delta);
        r["tolerance"] = {{"n0", t.n0}, {"delta", t.delta_rel}, {"p_within", t.p_within}, {"epsilon", t.epsilon}};
    } catch (const DomainError& e) {
        r["tolerance"] = {{"error", e.what()}};
    }
    if (!c.csv_path.empty()) {
        std::ofstream csv(c.csv_path);
        if (!csv) throw UsageError("cannot write " + c.csv_path);
        csv << "n,p,log_p\n";
        csv.precision(17);
        for (std::size_t n = 0; n < d.p.size(); ++n) {
            double lp = d.log_p(n);
            csv << n << ',' << d.p[n] << ',';
            if (std::isfinite(lp)) csv << lp;
            else csv << "-inf";
            csv << '\n';
        }
        r["csv_file"] = c.csv_path;
    }
    return r;
}

Json cmd_measure_charge(const RunConfig& c) {
    const ModelSpec model = model_of(c);
    StateVector s = resource_state(model, c.L, c.w);
    PEAConfig cfg;
    cfg.m = c.ancillas ? *c.ancillas : static_cast<int>(std::floor(std::log2(model.charge_range(c.L)))) + 1;
    cfg.seed = c.seed;
    PEACircuit circ = pea_circuit(s, model, cfg);
    Json outcomes = Json::array();
    std::map<int, int> freq;
    for (int shot = 0; shot < c.shots; ++shot) {
        Rng rng(c.seed, static_cast<std::uint64_t>(shot));
        PEAOutcome o = pea_sample(circ, rng);
        Json x = {{"bits", o.bits}, {"charge_mod", o.charge_mod}, {"probability", o.probability}};
        if (!circ.aliasing) x["charge"] = o.charge_mod - circ.offset;
        outcomes.push_back(x);
        ++freq[o.charge_mod];
    }
    Json table = Json::array();
    for (auto [v, k] : freq)
        table.push_back({{"charge_mod", v}, {"count", k}, {"frequency", static_cast<double>(k) / c.shots}, {"born", circ.readout_probability[static_cast<std::size_t>(v)]}});
    return {{"ancillas", cfg.m},
            {"offset", circ.offset},
            {"aliasing", circ.aliasing},
            {"depth_modeled", false},
            {"outcomes", outcomes},
            {"frequencies", table},
            {"sector_weights", sector_json(charge_sector_weights(model, s))}};
}

Json cmd_measure_momentum(const RunConfig& c) {
    const ModelSpec model = model_of(c);
    Json r;
    StateVector s = chosen_state(model, c, r);
    Json outcomes = Json::array();
    std::map<int, int> freq;
    if (c.method == "parity") {
        auto br = momentum_parity_branches(s);
        r["born"] = {br[0].probability, br[1].probability};
        r["off_axis_weight"] = br[0].off_axis_weight;
        r["warning"] = br[0].warning;
        for (int shot = 0; shot < c.shots; ++shot) {
            Rng rng(c.seed, static_cast<std::uint64_t>(shot));
            const int bit = momentum_parity_measure(s, rng).bit;
            outcomes.push_back(bit);
            ++freq[bit];
        }
    } else if (c.method == "pea") {
        int m = 0;
        while ((1 << m) < c.L) ++m;
        MomentumPEA circ = momentum_pea_circuit(s, m);
        r["born"] = circ.readout_probability;
        for (int shot = 0; shot < c.shots; ++shot) {
            Rng rng(c.seed, static_cast<std::uint64_t>(shot));
            const int p = momentum_pea(s, m, rng).charge_mod;
            outcomes.push_back(p);
            ++freq[p];
        }
    } else {
        throw UsageError("unknown method '" + c.method + "' (valid: parity, pea)");
    }
    Json table = Json::array();
    for (auto [v, k] : freq) table.push_back({{"outcome", v}, {"count", k}, {"frequency", static_cast<double>(k) / c.shots}});
    r["outcomes"] = outcomes;
    r["frequencies"] = table;
    return r;
}

Json cmd_translate(const RunConfig& c) {
    if (c.L < 3) throw UsageError("translate needs L >= 3");
    std::vector<int> dims(static_cast<std::size_t>(c.L + 1), c.d);
    dims[0] = 2;
    Rng rng(c.seed, 0);
    StateVector s = random_state(dims, rng);
    const StateVector direct = controlled_translate(s, 0, TranslateMode::direct, rng);
    Json r;
    if (c.mode == "direct") {
        r["fidelity"] = 1.0;
    } else if (c.mode == "protocol") {
        Rng prng(c.seed, 1);
        r["fidelity"] = fidelity(direct, controlled_translate(s, 0, TranslateMode::protocol, prng));
    } else {
        throw UsageError("unknown mode '" + c.mode + "' (valid: protocol, direct)");
    }
    if (c.exhaustive) {
        const int branches = protocol_branch_count(c.L, c.d);
        const int k = 2 * (c.L - 2);
        double worst = 1.0, total = 0.0;
        for (int b = 0; b < branches; ++b) {
            std::vector<int> outcomes(static_cast<std::size_t>(c.L - 2));
            int rest = b;
            for (int j = c.L - 3; j >= 0; --j) {
                outcomes[static_cast<std::size_t>(j)] = rest % (c.d * c.d);
                rest /= c.d * c.d;
            }
            double p = 0.0;
            StateVector out = protocol_branch(s, 0, outcomes, &p);
            total += p;
            worst = std::min(worst, fidelity(direct, out));
        }
        r["branches"] = branches;
        r["bell_digits"] = k;
        r["min_branch_fidelity"] = worst;
        r["branch_probability_sum"] = total;
    }
    return r;
}

Json cmd_mpu_check(const RunConfig& c) {
    if (c.builtin.empty() == c.mpu_file.empty()) throw UsageError("give exactly one of --builtin or --file");
    MPU u;
    try {
        u = c.builtin.empty() ? mpu_from_json(read_json_file(c.mpu_file)) : builtin_mpu(c.builtin);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return {{"table", correction_table_to_json(mpu_correctable(u))}};
}

Json cmd_verify(const RunConfig& c) {
    const ModelSpec model = model_of(c);
    if (!c.n) throw UsageError("verify needs --n");
    TowerState t = exact_tower(model, c.L, *c.n);
    Json r = {{"annihilated", t.annihilated}, {"charge", t.charge}, {"norm_sq_raw", t.norm_sq_raw}};
    if (t.annihilated) return r;
    EnergyCheck e = hamiltonian_residual(model, t.state);
    r["energy"] = e.energy;
    r["residual"] = e.residual;
    if (t.energy) {
        r["expected_energy"] = *t.energy;
        r["residual_at_expected"] = t.residual;
        if (t.residual > 1e-8) throw NumericalError("tower member fails the eigenstate check: residual " + std::to_string(t.residual));
    }
    return r;
}

Json cmd_arovas(const RunConfig& c) {
    if (c.seeds < 1) throw UsageError("--seeds must be positive");
    ArovasOracle o = arovas_oracle(c.L);
    std::vector<RepeatReport> reps(static_cast<std::size_t>(c.seeds));
    const int workers = std::min(worker_count(), c.seeds);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int k = w; k < c.seeds; k += workers) {
                    Rng rng(c.seed, static_cast<std::uint64_t>(k));
                    reps[static_cast<std::size_t>(k)] = prepare_arovas(c.L, c.alpha, c.max_rounds, rng);
                    reps[static_cast<std::size_t>(k)].final_state = StateVector();
                }
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::map<int, int> hist;
    double rounds = 0.0, err = 0.0;
    int ok = 0;
    Json runs = Json::array();
    for (int k = 0; k < c.seeds; ++k) {
        const auto& r = reps[static_cast<std::size_t>(k)];
        ++hist[r.rounds_used];
        runs.push_back({{"seed_index", k}, {"rounds", r.rounds_used}, {"succeeded", r.succeeded}, {"error", r.error}});
        if (r.succeeded) {
            ++ok;
            rounds += r.rounds_used;
            err += r.error;
        }
    }
    Json histogram = Json::array();
    for (auto [r, k] : hist) histogram.push_back({{"rounds", r}, {"count", k}});
    Json scaling = Json::array();
    for (double a : {c.alpha / 2, c.alpha, 2 * c.alpha}) {
        double p = round_success_probability(c.L, a);
        scaling.push_back({{"alpha", a},
                           {"success_probability", p},
                           {"expected_rounds", p > 0 ? 1.0 / p : 0.0},
                           {"failed_round_fidelity", failed_round_fidelity(c.L, a)}});
    }
    return {{"oracle",
             {{"energy", o.energy}, {"residual", o.residual}, {"translation", o.translation}, {"charge", o.charge}, {"raw_norm", o.raw_norm}}},
            {"workers", workers},
            {"succeeded", ok},
            {"mean_rounds", ok ? rounds / ok : 0.0},
            {"mean_error", ok ? err / ok : 0.0},
            {"rounds_histogram", histogram},
            {"runs", runs},
            {"scaling", scaling}};
}

Json error_json(const std::string& kind, const std::string& msg, int code) {
    return {{"error", msg}, {"kind", kind}, {"exit_code", code}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Measurement-based preparation of scar towers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto common = [&](CLI::App* s) {
        s->add_option("--seed", c.seed, "random seed");
        s->add_option("--out", c.out_path, "also write the JSON report here");
        s->add_option("--max-amplitudes", c.max_amplitudes, "amplitude cap for dense states");
    };
    auto model_opts = [&](CLI::App* s, bool with_w) {
        s->add_option("--model", c.model, "model name")->required();
        s->add_option("--L", c.L, "chain length")->required()->check(CLI::PositiveNumber);
        if (with_w) s->add_option("--w", c.w, "resource weight in [0, 1]");
        s->add_option("--boundary", c.boundary, "open or periodic (model default otherwise)");
        s->add_option("--coupling-J", c.couplings.J);
        s->add_option("--coupling-h", c.couplings.h);
        s->add_option("--coupling-lambda", c.couplings.lambda);
    };

    auto* prep = app.add_subcommand("prepare", "build the resource state, optionally project onto tower member n");
    model_opts(prep, true);
    common(prep);
    prep->add_option("--n", c.n);
    prep->add_option("--state-out", c.state_out);
    prep->add_option("--mps-out", c.mps_out);

    auto* dist = app.add_subcommand("distribution", "outcome distribution p_n and Gaussian summary");
    model_opts(dist, true);
    common(dist);
    c.method = "analytic";
    dist->add_option("--method", c.method, "analytic, transfer or brute");
    dist->add_option("--csv", c.csv_path);
    dist->add_option("--delta", c.delta, "relative tolerance window");

    auto* mc = app.add_subcommand("measure-charge", "phase-estimation charge readout on the resource state");
    model_opts(mc, true);
    common(mc);
    mc->add_option("--ancillas", c.ancillas);
    mc->add_option("--shots", c.shots)->check(CLI::PositiveNumber);

    auto* mm = app.add_subcommand("measure-momentum", "momentum parity or momentum phase estimation");
    model_opts(mm, true);
    common(mm);
    mm->add_option("--n", c.n);
    mm->add_option("--shots", c.shots)->check(CLI::PositiveNumber);
    std::string mm_method = "parity";
    mm->add_option("--method", mm_method, "parity or pea");

    auto* tr = app.add_subcommand("translate", "controlled translation: protocol against direct");
    common(tr);
    tr->add_option("--L", c.L)->check(CLI::PositiveNumber);
    tr->add_option("--d", c.d)->check(CLI::PositiveNumber);
    c.mode = "protocol";
    tr->add_option("--mode", c.mode, "protocol or direct");
    tr->add_flag("--exhaustive", c.exhaustive, "enumerate every Bell branch");

    auto* mp = app.add_subcommand("mpu-check", "operator-pushing correctability table");
    common(mp);
    mp->add_option("--builtin", c.builtin, "identity, translation or czx");
    mp->add_option("--file", c.mpu_file, "MPU JSON file");

    auto* vf = app.add_subcommand("verify", "eigenstate check of an exact tower member");
    model_opts(vf, false);
    common(vf);
    vf->add_option("--n", c.n);

    auto* ar = app.add_subcommand("arovas", "repeat-until-success Arovas-A preparation");
    common(ar);
    c.L = 6;
    ar->add_option("--L", c.L)->check(CLI::PositiveNumber);
    ar->add_option("--alpha", c.alpha);
    ar->add_option("--max-rounds", c.max_rounds)->check(CLI::PositiveNumber);
    ar->add_option("--seeds", c.seeds)->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what(), 2).dump() << '\n';
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (c.command == "measure-momentum") c.method = mm_method;

    const std::size_t old_cap = amplitude_cap();
    if (c.max_amplitudes) set_amplitude_cap(c.max_amplitudes);
    struct Restore {
        std::size_t cap;
        ~Restore() { set_amplitude_cap(cap); }
    } restore{old_cap};

    const auto t0 = std::chrono::steady_clock::now();
    Json result;
    try {
        if (c.command == "prepare") result = cmd_prepare(c);
        else if (c.command == "distribution") result = cmd_distribution(c);
        else if (c.command == "measure-charge") result = cmd_measure_charge(c);
        else if (c.command == "measure-momentum") result = cmd_measure_momentum(c);
        else if (c.command == "translate") result = cmd_translate(c);
        else if (c.command == "mpu-check") result = cmd_mpu_check(c);
        else if (c.command == "verify") result = cmd_verify(c);
        else result = cmd_arovas(c);
    } catch (const UsageError& e) {
        Json j = error_json("usage", e.what(), 2);
        j["valid_models"] = model_names();
        err << j.dump() << '\n';
        return 2;
    } catch (const SizeGuardError& e) {
        Json j = error_json("resources", e.what(), 3);
        j["amplitude_cap"] = amplitude_cap();
        err << j.dump() << '\n';
        return 3;
    } catch (const NumericalError& e) {
        err << error_json("numerical", e.what(), 4).dump() << '\n';
        return 4;
    } catch (const Error& e) {
        err << error_json("usage", e.what(), 2).dump() << '\n';
        return 2;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json report = result;
    report["tool"] = "scartower";
    report["version"] = kVersion;
    report["config"] = c.echo();
    report["seed"] = c.seed;
    report["wall_time_s"] = json_number(wall);
    out << report.dump(2) << '\n';
    if (!c.out_path.empty()) {
        try {
            write_json_file(c.out_path, report);
        } catch (const Error& e) {
            err << error_json("usage", e.what(), 2).dump() << '\n';
            return 2;
        }
    }
    return 0;
}

}  // namespace scartower
