#include "csd/experiment.hpp"

#include "csd/caratheodory.hpp"
#include "csd/hardness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace csd {

Caps caps_from_env(Caps base) {
    auto read = [](const char* name, auto& field) {
        if (const char* v = std::getenv(name)) {
            try {
                long long x = std::stoll(v);
                if (x <= 0) throw std::invalid_argument(name);
                field = static_cast<std::remove_reference_t<decltype(field)>>(x);
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string("bad value for ") + name);
            }
        }
    };
    read("CSD_CAP_N", base.max_n);
    read("CSD_CAP_D", base.max_d);
    read("CSD_CAP_FAMILY", base.max_family);
    read("CSD_CAP_INSTANCES", base.max_instances);
    return base;
}

Domain make_domain(const std::string& generator, std::size_t n, int d, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (d < 1) throw std::invalid_argument("d must be positive");
    std::vector<Point> pts;
    if (generator == "line") {
        if (d != 1) throw std::invalid_argument("the line generator is one-dimensional");
        for (std::size_t i = 0; i < n; ++i) pts.push_back({Scalar(static_cast<unsigned long>(i))});
    } else if (generator == "parabola" || generator == "moment") {
        if (generator == "parabola" && d != 2) throw std::invalid_argument("the parabola generator is planar");
        for (std::size_t t = 0; t < n; ++t) {
            Point p;
            Integer v = 1;
            for (int j = 0; j < d; ++j) {
                v *= static_cast<unsigned long>(t);
                p.push_back(Scalar(v));
            }
            pts.push_back(std::move(p));
        }
    } else if (generator == "grid") {
        std::size_t side = 1;
        while (true) {
            std::size_t total = 1;
            for (int j = 0; j < d; ++j) total *= side;
            if (total >= n) break;
            ++side;
        }
        std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t i = 0; i < n; ++i) {
            Point p;
            for (auto c : idx) p.push_back(Scalar(static_cast<unsigned long>(c)));
            pts.push_back(std::move(p));
            for (int j = d - 1; j >= 0; --j) {
                if (++idx[static_cast<std::size_t>(j)] < side) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
        }
    } else if (generator == "random") {
        std::mt19937_64 rng(seed);
        const long range = static_cast<long>(std::max<std::size_t>(8, 4 * n));
        std::set<Point> seen;
        while (pts.size() < n) {
            Point p;
            for (int j = 0; j < d; ++j) p.push_back(Scalar(static_cast<long>(rng() % static_cast<unsigned long>(range))));
            if (seen.insert(p).second) pts.push_back(std::move(p));
        }
    } else {
        throw std::invalid_argument("unknown generator: " + generator);
    }
    return Domain(d, std::move(pts));
}

// --- generators ----------------------------------------------------------------------------

Polytope random_polytope(int d, std::size_t cuts, std::mt19937_64& rng) {
    Mat w;
    Vec h;
    for (int j = 0; j < d; ++j)
        for (int s : {1, -1}) {
            Vec r(static_cast<std::size_t>(d), Scalar(0));
            r[static_cast<std::size_t>(j)] = s;
            w.push_back(std::move(r));
            h.push_back(4);
        }
    for (std::size_t c = 0; c < cuts; ++c) {
        Vec a;
        long l1 = 0;
        do {
            a.clear();
            l1 = 0;
            for (int j = 0; j < d; ++j) {
                long v = static_cast<long>(rng() % 7) - 3;
                a.push_back(Scalar(v));
                l1 += std::labs(v);
            }
        } while (l1 == 0);
        // Offset in [1, 4*l1 - 1]: cuts the box but keeps the origin inside.
        long b = 1 + static_cast<long>(rng() % static_cast<unsigned long>(std::max(1L, 4 * l1 - 1)));
        w.push_back(std::move(a));
        h.push_back(Scalar(b));
    }
    return Polytope::from_rows(d, w, h);
}

Point random_interior_point(const std::vector<Point>& vertices, std::mt19937_64& rng) {
    if (vertices.empty()) throw std::invalid_argument("no vertices");
    Point p(vertices.front().size(), Scalar(0));
    Scalar total = 0;
    for (const auto& v : vertices) {
        Scalar wgt(static_cast<long>(1 + rng() % 16));
        total += wgt;
        for (std::size_t j = 0; j < p.size(); ++j) p[j] += wgt * v[j];
    }
    for (auto& c : p) c /= total;
    return p;
}

std::vector<int> random_halfspace_labels(const Domain& u, std::mt19937_64& rng) {
    Vec a;
    do {
        a.clear();
        for (int j = 0; j < u.dim; ++j) a.push_back(Scalar(static_cast<long>(rng() % 11) - 5));
    } while (std::all_of(a.begin(), a.end(), [](const Scalar& s) { return s == 0; }));
    std::vector<Scalar> vals;
    for (const auto& p : u.points) vals.push_back(dot(a, p));
    std::vector<Scalar> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    // Cut between two consecutive distinct values, or outside the range.
    std::size_t cut = static_cast<std::size_t>(rng() % (sorted.size() + 1));
    Scalar b = cut == 0 ? Scalar(sorted.front() - 1)
               : cut == sorted.size() ? Scalar(sorted.back() + 1)
                                      : Scalar((sorted[cut - 1] + sorted[cut]) / 2);
    std::vector<int> labels;
    for (const auto& v : vals) labels.push_back(v < b ? -1 : 1);
    return labels;
}

namespace {

PointSet random_subset_of(const std::vector<int>& pool, std::mt19937_64& rng, bool nonempty) {
    PointSet s;
    for (int i : pool)
        if (rng() & 1u) s.push_back(i);
    if (s.empty() && nonempty && !pool.empty()) s.push_back(pool[rng() % pool.size()]);
    return s;
}

}  // namespace

std::pair<PointSet, PointSet> random_separable_pair(const Domain& u, std::mt19937_64& rng) {
    std::vector<int> neg, pos;
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto labels = random_halfspace_labels(u, rng);
        neg.clear();
        pos.clear();
        for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] < 0 ? neg : pos).push_back(static_cast<int>(i));
        if (!neg.empty() && !pos.empty()) break;
    }
    return {random_subset_of(neg, rng, true), random_subset_of(pos, rng, true)};
}

std::pair<PointSet, PointSet> random_intersecting_pair(const Domain& u, std::mt19937_64& rng) {
    std::vector<int> all;
    for (std::size_t i = 0; i < u.size(); ++i) all.push_back(static_cast<int>(i));
    int shared = static_cast<int>(rng() % u.size());
    PointSet x = random_subset_of(all, rng, false), y = random_subset_of(all, rng, false);
    x.push_back(shared);
    y.push_back(shared);
    return {normalize_set(x, u.size()), normalize_set(y, u.size())};
}

// --- harness -------------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
    bool on;
    Clock::time_point start = Clock::now();
    double ms() const { return on ? std::chrono::duration<double, std::milli>(Clock::now() - start).count() : 0.0; }
};

std::vector<PointSet> all_nonempty_subsets(std::size_t n) {
    std::vector<PointSet> out;
    for (unsigned m = 1; m < (1u << n); ++m) {
        PointSet s;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1u) s.push_back(static_cast<int>(i));
        out.push_back(std::move(s));
    }
    return out;
}

int hull_oracle(const Domain& u, const PointSet& x, const PointSet& y) {
    if (x.empty() || y.empty()) return 1;
    return hulls_intersect(u, x, y).intersecting ? 0 : 1;
}

std::string pad_id(const std::string& prefix, std::size_t i) {
    std::ostringstream s;
    s << prefix << '-' << std::setw(6) << std::setfill('0') << i;
    return s.str();
}

void finish(ExperimentResult& res, RunRecord rec, const Instance* inst) {
    if (rec.oracle && *rec.oracle != rec.decision) {
        rec.flagged = true;
        ++res.mismatches;
        if (!res.offending && inst) res.offending = to_json(*inst);
    }
    res.records.push_back(std::move(rec));
}

RunRecord protocol_record(const std::string& id, const Domain& u, const Scalar& eps, const ProtocolOutcome& o) {
    RunRecord r;
    r.instance_id = id;
    r.n = u.size();
    r.d = u.dim;
    r.eps = eps;
    r.decision = o.decision;
    r.bits = transcript_bits(o);
    r.rounds = o.rounds.size();
    for (const auto& rr : o.rounds) r.family_sizes.push_back(rr.family_size);
    return r;
}

void check_caps(const ExperimentConfig& cfg, std::size_t n, int d) {
    if (n > cfg.caps.max_n) throw CapExceeded("n exceeds cap");
    if (d > cfg.caps.max_d) throw CapExceeded("d exceeds cap");
}

ProtocolConfig protocol_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    ProtocolConfig pc;
    pc.epsilon = cfg.epsilon;
    pc.containers.mode = cfg.net_mode;
    pc.containers.seed = seed;
    return pc;
}

// Set-pair instances for the two CSD tasks.
std::vector<Instance> set_instances(const ExperimentConfig& cfg, const Domain& u, bool promise_only) {
    std::vector<Instance> out;
    auto push = [&](PointSet x, PointSet y) {
        Instance inst;
        inst.task = cfg.task;
        inst.domain = u;
        inst.alice = std::move(x);
        inst.bob = std::move(y);
        inst.epsilon = cfg.epsilon;
        inst.seed = cfg.seed;
        inst.id = pad_id(cfg.task, out.size());
        out.push_back(std::move(inst));
    };
    if (cfg.count == 0) {
        if (u.size() > 8) throw CapExceeded("exhaustive sweeps need n <= 8; pass --count");
        auto subs = all_nonempty_subsets(u.size());
        for (const auto& x : subs)
            for (const auto& y : subs) {
                if (promise_only && !in_promise(u, x, y)) continue;
                push(x, y);
                if (out.size() > cfg.caps.max_instances) throw CapExceeded("too many instances");
            }
        return out;
    }
    if (cfg.count > cfg.caps.max_instances) throw CapExceeded("too many instances");
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.count; ++i) {
        auto [x, y] = (i % 2 == 0) ? random_separable_pair(u, rng) : random_intersecting_pair(u, rng);
        push(std::move(x), std::move(y));
    }
    return out;
}

std::vector<Instance> learn_instances(const ExperimentConfig& cfg, const Domain& u) {
    std::vector<Instance> out;
    std::size_t count = cfg.count ? cfg.count : 100;
    if (count > cfg.caps.max_instances) throw CapExceeded("too many instances");
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto labels = random_halfspace_labels(u, rng);
        Instance inst;
        inst.task = "learn";
        inst.domain = u;
        inst.epsilon = cfg.epsilon;
        inst.seed = cfg.seed;
        inst.id = pad_id("learn", i);
        for (std::size_t p = 0; p < u.size(); ++p) {
            auto r = rng() % 3;
            if (r == 0) inst.alice_sample.emplace_back(static_cast<int>(p), labels[p]);
            if (r == 1) inst.bob_sample.emplace_back(static_cast<int>(p), labels[p]);
        }
        out.push_back(std::move(inst));
    }
    return out;
}

std::optional<int> realizable(const Domain& u, const Sample& a, const Sample& b) {
    std::set<int> pos, neg;
    for (const auto* s : {&a, &b})
        for (auto [i, l] : *s) (l > 0 ? pos : neg).insert(i);
    for (int i : pos)
        if (neg.count(i)) return 0;
    if (pos.empty() || neg.empty()) return 1;
    return hulls_intersect(u, PointSet(pos.begin(), pos.end()), PointSet(neg.begin(), neg.end())).intersecting ? 0 : 1;
}

void run_instances(const ExperimentConfig& cfg, const std::vector<Instance>& insts, ExperimentResult& res) {
    if (insts.empty()) return;
    ProtocolEngine engine(protocol_config(cfg, insts.front().seed));
    for (const auto& inst : insts) {
        check_caps(cfg, inst.domain.size(), inst.domain.dim);
        Timer t{cfg.timing};
        RunRecord r;
        if (inst.task == "promise-csd") {
            auto o = run_promise_csd(inst.domain, inst.alice, inst.bob, engine);
            r = protocol_record(inst.id, inst.domain, inst.epsilon, o);
            if (cfg.verify && in_promise(inst.domain, inst.alice, inst.bob))
                r.oracle = hull_oracle(inst.domain, inst.alice, inst.bob);
        } else if (inst.task == "csd") {
            auto o = run_csd(inst.domain, inst.alice, inst.bob, engine);
            r = protocol_record(inst.id, inst.domain, inst.epsilon, o.promise);
            if (cfg.verify) r.oracle = hull_oracle(inst.domain, inst.alice, inst.bob);
        } else {
            auto o = run_learning(inst.alice_sample, inst.bob_sample, inst.domain, engine);
            r.instance_id = inst.id;
            r.n = inst.domain.size();
            r.d = inst.domain.dim;
            r.eps = inst.epsilon;
            bool consistent = o.ok;
            if (o.ok)
                for (const auto* s : {&inst.alice_sample, &inst.bob_sample})
                    for (auto [i, l] : *s)
                        if (o.hypothesis.labels[static_cast<std::size_t>(i)] != l) consistent = false;
            r.decision = consistent ? 1 : 0;
            r.bits = transcript_bits(o.transcript);
            r.rounds = o.transcript.messages.size();
            if (cfg.verify) r.oracle = realizable(inst.domain, inst.alice_sample, inst.bob_sample);
        }
        for (auto s : r.family_sizes)
            if (s > cfg.caps.max_family) throw CapExceeded("family size exceeds cap");
        r.time_ms = t.ms();
        finish(res, std::move(r), &inst);
    }
}

void run_containers(const ExperimentConfig& cfg, const Domain& u, ExperimentResult& res) {
    std::vector<Scalar> eps = cfg.eps_list;
    if (eps.empty()) eps = {Scalar(1, 2), Scalar(1, 4), Scalar(1, 8)};
    Json table = Json::array();
    for (const auto& e : eps) {
        Timer t{cfg.timing};
        ContainerConfig cc;
        cc.mode = cfg.net_mode;
        cc.seed = cfg.seed;
        ContainerSystem sys(u, e, cc);
        ContainerFamily fam = sys.build();
        if (fam.containers.size() > cfg.caps.max_family) throw CapExceeded("family size exceeds cap");
        RunRecord r;
        r.instance_id = "containers-eps-" + to_string(e);
        r.n = u.size();
        r.d = u.dim;
        r.eps = e;
        r.bits = fam.code_bits;
        r.rounds = fam.net.refinements;
        r.family_sizes = {fam.containers.size()};
        std::size_t uncovered = 0;
        if (cfg.verify) {
            for (const auto& tr : sys.traces()) {
                PointSet f = tr.members.indices();
                bool ok = std::any_of(fam.containers.begin(), fam.containers.end(), [&](const Container& c) {
                    return verify_container(c.members, f, e, u.size());
                });
                if (!ok) ++uncovered;
            }
            r.oracle = 1;
        }
        r.decision = uncovered == 0 ? 1 : 0;
        r.time_ms = t.ms();
        table.push_back({{"eps", to_string(e)},
                         {"family_size", fam.containers.size()},
                         {"net_size", fam.net.members.size()},
                         {"code_bits", fam.code_bits},
                         {"traces", fam.trace_count},
                         {"uncovered", uncovered}});
        finish(res, std::move(r), nullptr);
    }
    res.summary["family_sizes"] = std::move(table);
}

void run_hardness(const ExperimentConfig& cfg, ExperimentResult& res) {
    const int len = cfg.k * cfg.c;
    if (cfg.k < 1 || cfg.c < 1) throw std::invalid_argument("k and c must be positive");
    std::vector<std::pair<Bits, Bits>> pairs;
    auto bits_of = [len](unsigned v) {
        Bits b;
        for (int i = len - 1; i >= 0; --i) b.push_back(static_cast<int>((v >> i) & 1u));
        return b;
    };
    if (cfg.count == 0) {
        if (len > 8) throw CapExceeded("exhaustive hardness sweeps need c*k <= 8; pass --count");
        for (unsigned x = 0; x < (1u << len); ++x)
            for (unsigned y = 0; y < (1u << len); ++y) pairs.emplace_back(bits_of(x), bits_of(y));
    } else {
        std::mt19937_64 rng(cfg.seed);
        for (std::size_t i = 0; i < cfg.count; ++i) {
            Bits x, y;
            for (int j = 0; j < len; ++j) {
                x.push_back(static_cast<int>(rng() & 1u));
                y.push_back(static_cast<int>(rng() & 1u));
            }
            pairs.emplace_back(std::move(x), std::move(y));
        }
    }
    if (pairs.size() > cfg.caps.max_instances) throw CapExceeded("too many instances");
    ProtocolEngine engine(protocol_config(cfg, cfg.seed));
    std::size_t i = 0;
    for (const auto& [x, y] : pairs) {
        Timer t{cfg.timing};
        PromiseInstance pi = cfg.c == 1 ? disj_to_promise_csd(x, y) : disj_to_csd_full(x, y, cfg.k, cfg.c);
        const Domain& u = pi.gadget.domain;
        check_caps(cfg, u.size(), u.dim);
        auto o = run_promise_csd(u, pi.alice, pi.bob, engine);
        RunRecord r = protocol_record(pad_id("hardness", i++), u, cfg.epsilon, o);
        int expected = disj(x, y);
        // The mapped instance must sit inside the promise and agree with the hull oracle.
        if (!in_promise(u, pi.alice, pi.bob) || hull_oracle(u, pi.alice, pi.bob) != expected) expected = -1;
        if (cfg.verify) r.oracle = expected;
        r.time_ms = t.ms();
        Instance inst;
        inst.id = r.instance_id;
        inst.domain = u;
        inst.alice = pi.alice;
        inst.bob = pi.bob;
        finish(res, std::move(r), &inst);
    }
}

void run_bvt_check(const ExperimentConfig& cfg, ExperimentResult& res) {
    std::size_t count = cfg.count ? cfg.count : 50;
    if (cfg.d < 1 || cfg.d > 4) throw std::invalid_argument("bvt-check supports 1 <= d <= 4");
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = 0; i < count; ++i) {
        Timer t{cfg.timing};
        Polytope q = random_polytope(cfg.d, 1 + rng() % 4, rng);
        auto verts = enumerate_vertices(q);
        std::set<BvtSequence> seqs;
        std::size_t failures = 0;
        for (int s = 0; s < 100; ++s) {
            Point a = random_interior_point(verts, rng);
            BvtSequence seq = bvt_encode(q, a);
            auto simplex = bvt_decode(q, seq);
            if (!convex_combination(a, simplex)) ++failures;
            seqs.insert(seq);
        }
        Integer bound = 1;
        for (int j = 0; j < cfg.d; ++j) bound *= static_cast<unsigned long>(q.size());
        if (Integer(static_cast<unsigned long>(seqs.size())) > bound) ++failures;
        RunRecord r;
        r.instance_id = pad_id("bvt", i);
        r.n = q.size();
        r.d = cfg.d;
        r.eps = 0;
        r.decision = failures == 0 ? 1 : 0;
        r.bits = seqs.size();
        r.rounds = 100;
        if (cfg.verify) r.oracle = 1;
        r.time_ms = t.ms();
        finish(res, std::move(r), nullptr);
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.epsilon <= 0 || cfg.epsilon > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
    ExperimentResult res;
    const std::string& task = cfg.task;
    auto domain = [&]() {
        check_caps(cfg, cfg.n, cfg.d);
        return make_domain(cfg.generator, cfg.n, cfg.d, cfg.seed);
    };
    if (task == "promise-csd" || task == "csd" || task == "learn") {
        std::vector<Instance> insts;
        if (!cfg.input.empty()) {
            Instance inst = instance_from_json(read_json_file(cfg.input));
            if (inst.task != task) throw std::invalid_argument("instance task does not match --task");
            if (inst.id.empty()) inst.id = pad_id(task, 0);
            insts.push_back(std::move(inst));
        } else {
            Domain u = domain();
            insts = task == "learn" ? learn_instances(cfg, u) : set_instances(cfg, u, task == "promise-csd");
        }
        run_instances(cfg, insts, res);
    } else if (task == "containers") {
        Domain u = cfg.input.empty() ? domain() : domain_from_json(read_json_file(cfg.input).at("domain"));
        run_containers(cfg, u, res);
    } else if (task == "hardness-sweep") {
        run_hardness(cfg, res);
    } else if (task == "bvt-check") {
        run_bvt_check(cfg, res);
    } else {
        throw std::invalid_argument("unknown task: " + task);
    }
    std::sort(res.records.begin(), res.records.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.instance_id < b.instance_id; });
    res.summary["task"] = task;
    res.summary["records"] = res.records.size();
    res.summary["mismatches"] = res.mismatches;
    return res;
}

std::string records_csv(const std::vector<RunRecord>& records) {
    std::ostringstream s;
    s << "instance_id,n,d,eps,decision,oracle,bits,rounds,time_ms\n";
    for (const auto& r : records) {
        s << r.instance_id << ',' << r.n << ',' << r.d << ',' << to_string(r.eps) << ',' << r.decision << ',';
        if (r.oracle) s << *r.oracle;
        s << ',' << r.bits << ',' << r.rounds << ',' << std::fixed << std::setprecision(3) << r.time_ms << '\n';
        s.unsetf(std::ios::fixed);
    }
    return s.str();
}

Json records_json(const std::vector<RunRecord>& records) {
    Json out = Json::array();
    for (const auto& r : records) {
        Json j = {{"instance_id", r.instance_id},
                  {"n", r.n},
                  {"d", r.d},
                  {"eps", to_string(r.eps)},
                  {"decision", r.decision},
                  {"oracle", r.oracle ? Json(*r.oracle) : Json(nullptr)},
                  {"bits", r.bits},
                  {"rounds", r.rounds},
                  {"family_sizes", r.family_sizes},
                  {"time_ms", r.time_ms},
                  {"flagged", r.flagged}};
        out.push_back(std::move(j));
    }
    return out;
}

ScalingReport bits_scaling_report(const std::string& task, const std::vector<std::size_t>& ns,
                                  const std::vector<int>& ds, std::uint64_t seed, std::size_t per_point,
                                  double c_max, ContainerConfig containers) {
    if (task != "promise" && task != "csd") throw std::invalid_argument("scaling task is promise or csd");
    ScalingReport rep;
    rep.c_max = c_max;
    for (int d : ds) {
        double last_mean = -1;
        for (std::size_t n : ns) {
            if (n < 2) throw std::invalid_argument("scaling needs n >= 2");
            Domain u = make_domain(d == 1 ? "line" : "moment", n, d, seed);
            ProtocolConfig pc;
            pc.containers = containers;
            ProtocolEngine engine(pc);
            std::mt19937_64 rng(seed ^ (n * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(d));
            double total = 0;
            for (std::size_t i = 0; i < per_point; ++i) {
                auto [x, y] = (i % 2 == 0) ? random_separable_pair(u, rng) : random_intersecting_pair(u, rng);
                ProtocolOutcome o =
                    task == "promise" ? run_promise_csd(u, x, y, engine) : run_csd(u, x, y, engine).promise;
                std::ostringstream id;
                id << task << "-d" << d << "-n" << std::setw(4) << std::setfill('0') << n << '-' << i;
                RunRecord r = protocol_record(id.str(), u, pc.epsilon, o);
                r.oracle = hull_oracle(u, x, y);
                r.flagged = *r.oracle != r.decision;
                double dd = d;
                double norm = (task == "promise" ? dd : dd * dd) * std::log2(dd + 1) * std::log2(static_cast<double>(n));
                rep.c_fit = std::max(rep.c_fit, static_cast<double>(r.bits) / norm);
                total += static_cast<double>(r.bits);
                rep.records.push_back(std::move(r));
            }
            double mean = per_point ? total / static_cast<double>(per_point) : 0;
            rep.mean_bits.push_back({{d, n}, mean});
            if (mean < last_mean) rep.monotone = false;
            last_mean = mean;
        }
    }
    rep.bounded = rep.c_fit <= c_max;
    return rep;
}

}  // namespace csd
