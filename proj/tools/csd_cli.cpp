#include "csd/experiment.hpp"
#include "csd/hardness.hpp"
#include "csd/io.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace csd;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;

struct Common {
    std::string task = "promise-csd";
    std::string input, output, format = "csv", generator = "line", eps = "1/4", net = "exact";
    std::size_t n = 8, count = 0;
    int d = 1, k = 2, c = 1;
    std::uint64_t seed = 0x5eedULL;
    std::vector<std::string> eps_list;
    bool timing = false;
    std::size_t cap_n = 0, cap_family = 0, cap_instances = 0;
    int cap_d = 0;
};

void add_common(CLI::App* app, Common& o) {
    app->add_option("--task", o.task, "promise-csd | csd | learn | containers | hardness-sweep | bvt-check");
    app->add_option("--input", o.input, "instance JSON file");
    app->add_option("--output", o.output, "output path (stdout when omitted)");
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--generator", o.generator, "line | parabola | grid | moment | random");
    app->add_option("--n", o.n, "domain size");
    app->add_option("--d", o.d, "dimension");
    app->add_option("--eps", o.eps, "epsilon as p/q");
    app->add_option("--eps-list", o.eps_list, "epsilons for the containers task")->delimiter(',');
    app->add_option("--seed", o.seed, "shared seed");
    app->add_option("--count", o.count, "random instances (0: exhaustive)");
    app->add_option("--k", o.k, "bits per block (hardness)");
    app->add_option("--c", o.c, "blocks (hardness)");
    app->add_option("--net", o.net, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));
    app->add_flag("--timing", o.timing, "record wall time (output no longer byte-identical)");
    app->add_option("--cap-n", o.cap_n, "max domain size");
    app->add_option("--cap-d", o.cap_d, "max dimension");
    app->add_option("--cap-family", o.cap_family, "max container family size");
    app->add_option("--cap-instances", o.cap_instances, "max instances per run");
}

ExperimentConfig to_config(const Common& o, bool verify) {
    ExperimentConfig cfg;
    cfg.task = o.task;
    cfg.input = o.input;
    cfg.generator = o.generator;
    cfg.n = o.n;
    cfg.d = o.d;
    cfg.epsilon = parse_scalar(o.eps);
    for (const auto& e : o.eps_list) cfg.eps_list.push_back(parse_scalar(e));
    cfg.seed = o.seed;
    cfg.count = o.count;
    cfg.k = o.k;
    cfg.c = o.c;
    cfg.verify = verify;
    cfg.timing = o.timing;
    cfg.net_mode = o.net == "sampled" ? NetMode::Sampled : NetMode::Exact;
    cfg.caps = caps_from_env();
    if (o.cap_n) cfg.caps.max_n = o.cap_n;
    if (o.cap_d) cfg.caps.max_d = o.cap_d;
    if (o.cap_family) cfg.caps.max_family = o.cap_family;
    if (o.cap_instances) cfg.caps.max_instances = o.cap_instances;
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

int run_records(const Common& o, bool verify) {
    ExperimentConfig cfg = to_config(o, verify);
    ExperimentResult res = run_experiment(cfg);
    if (o.format == "csv") {
        emit(o.output, records_csv(res.records));
    } else {
        Json j = {{"summary", res.summary}, {"records", records_json(res.records)}};
        emit(o.output, j.dump(2) + "\n");
    }
    std::cerr << res.records.size() << " records, " << res.mismatches << " mismatches\n";
    if (verify && res.mismatches > 0) {
        if (res.offending) std::cerr << "offending instance:\n" << res.offending->dump(2) << "\n";
        return kVerifyFailed;
    }
    return kOk;
}

// A single instance file under `run` prints the full outcome with its transcript.
int run_single(const Common& o) {
    Instance inst = instance_from_json(read_json_file(o.input));
    ProtocolConfig pc;
    pc.epsilon = inst.epsilon;
    pc.containers.seed = inst.seed;
    pc.containers.mode = o.net == "sampled" ? NetMode::Sampled : NetMode::Exact;
    ProtocolEngine engine(pc);
    Json out;
    if (inst.task == "promise-csd") out = to_json(run_promise_csd(inst.domain, inst.alice, inst.bob, engine));
    if (inst.task == "csd") out = to_json(run_csd(inst.domain, inst.alice, inst.bob, engine));
    if (inst.task == "learn") out = to_json(run_learning(inst.alice_sample, inst.bob_sample, inst.domain, engine));
    out["instance_id"] = inst.id;
    emit(o.output, out.dump(2) + "\n");
    return kOk;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    // "16..256" doubles from 16 to 256; otherwise a comma list.
    std::vector<std::size_t> out;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::size_t lo = std::stoul(text.substr(0, dots)), hi = std::stoul(text.substr(dots + 2));
        if (lo == 0) throw std::invalid_argument("range must start above 0");
        for (std::size_t v = lo; v <= hi; v *= 2) out.push_back(v);
        return out;
    }
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ','))
        if (!item.empty()) out.push_back(std::stoul(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convex set disjointness protocols, containers and oracles"};
    app.require_subcommand(1);

    Common run_opts, verify_opts;
    auto* run = app.add_subcommand("run", "run instances and emit records (or one outcome for --input)");
    add_common(run, run_opts);
    auto* verify = app.add_subcommand("verify", "run instances against the brute-force oracles");
    add_common(verify, verify_opts);

    std::string sweep_task = "promise", ns = "16..256", ds = "1,2", sweep_out, sweep_net = "exact";
    std::uint64_t sweep_seed = 0x5eedULL;
    std::size_t per_point = 4;
    double c_max = 16;
    auto* sweep = app.add_subcommand("sweep", "bits-vs-(n,d) scaling report as CSV");
    sweep->add_option("--task", sweep_task, "promise | csd")->check(CLI::IsMember({"promise", "csd"}));
    sweep->add_option("--n", ns, "sizes: a..b (doubling) or a comma list");
    sweep->add_option("--d", ds, "dimensions, comma list");
    sweep->add_option("--seed", sweep_seed);
    sweep->add_option("--per-point", per_point, "instances per (d, n)");
    sweep->add_option("--c-max", c_max, "bound on the fitted constant");
    sweep->add_option("--output", sweep_out);
    sweep->add_option("--net", sweep_net)->check(CLI::IsMember({"exact", "sampled"}));

    std::string gen_kind, gen_out, gen_generator = "line", gen_x, gen_y, gen_eps = "1/4";
    std::size_t gen_n = 8;
    int gen_d = 1, gen_k = 2, gen_c = 1, gen_q = 2;
    std::uint64_t gen_seed = 0x5eedULL;
    auto* gen = app.add_subcommand("gen", "generators: domain | gadget | plane | cover | containers");
    gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"domain", "gadget", "plane", "cover", "containers"}));
    gen->add_option("--generator", gen_generator);
    gen->add_option("--n", gen_n);
    gen->add_option("--d", gen_d);
    gen->add_option("--k", gen_k);
    gen->add_option("--c", gen_c);
    gen->add_option("--x", gen_x, "Alice's bit string");
    gen->add_option("--y", gen_y, "Bob's bit string");
    gen->add_option("--q", gen_q, "projective plane order (prime)");
    gen->add_option("--eps", gen_eps);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--output", gen_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) {
            if (!run_opts.input.empty() && run_opts.task != "containers") return run_single(run_opts);
            return run_records(run_opts, false);
        }
        if (*verify) return run_records(verify_opts, true);
        if (*sweep) {
            ContainerConfig cc;
            cc.mode = sweep_net == "sampled" ? NetMode::Sampled : NetMode::Exact;
            cc.seed = sweep_seed;
            std::vector<int> dims;
            for (auto v : parse_sizes(ds)) dims.push_back(static_cast<int>(v));
            ScalingReport rep = bits_scaling_report(sweep_task, parse_sizes(ns), dims, sweep_seed, per_point, c_max, cc);
            emit(sweep_out, records_csv(rep.records));
            std::cerr << "c_fit=" << rep.c_fit << " c_max=" << rep.c_max << " bounded=" << rep.bounded
                      << " monotone=" << rep.monotone << "\n";
            bool wrong = std::any_of(rep.records.begin(), rep.records.end(), [](const RunRecord& r) { return r.flagged; });
            return (rep.bounded && !wrong) ? kOk : kVerifyFailed;
        }
        if (*gen) {
            Json out;
            auto bits = [](const std::string& s) {
                Bits b;
                for (char ch : s) {
                    if (ch != '0' && ch != '1') throw std::invalid_argument("bit strings use 0 and 1");
                    b.push_back(ch - '0');
                }
                return b;
            };
            if (gen_kind == "domain") {
                out = {{"domain", to_json(make_domain(gen_generator, gen_n, gen_d, gen_seed))}};
            } else if (gen_kind == "gadget") {
                Bits x = bits(gen_x), y = bits(gen_y);
                PromiseInstance pi = gen_c == 1 ? disj_to_promise_csd(x, y) : disj_to_csd_full(x, y, gen_k, gen_c);
                Instance inst;
                inst.id = "disj-" + gen_x + "-" + gen_y;
                inst.domain = pi.gadget.domain;
                inst.alice = pi.alice;
                inst.bob = pi.bob;
                out = to_json(inst);
                out["disj"] = disj(x, y);
            } else if (gen_kind == "plane") {
                ProjectivePlane p = projective_plane_lines(gen_q);
                out = {{"q", p.q}, {"points", p.points}, {"lines", p.lines}};
            } else if (gen_kind == "cover") {
                CoverDemo d = container_cover_demo(gen_q, parse_scalar(gen_eps));
                out = {{"q", d.q},
                       {"points", d.points},
                       {"container_size", d.container_size},
                       {"max_lines_per_container", d.max_lines_per_container},
                       {"min_cover", d.min_cover},
                       {"cover", d.cover}};
            } else {
                Domain u = make_domain(gen_generator, gen_n, gen_d, gen_seed);
                ContainerConfig cc;
                cc.seed = gen_seed;
                out = to_json(build_container_family(u, parse_scalar(gen_eps), cc));
            }
            emit(gen_out, out.dump(2) + "\n");
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
