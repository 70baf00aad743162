#include "csd/containers.hpp"

#include "csd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace csd {

std::size_t sampled_net_size(std::size_t n, int k, const Scalar& eps, double c0) {
    double e = eps.get_d();
    double kk = std::max(k, 1);
    double raw = c0 * kk * kk * std::log2(kk + 1) * std::log2(1.0 / e) / e;
    auto s = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::min(n, s);
}

std::size_t code_length_bound(std::size_t v_size, int k) {
    Integer traces = 1;
    mpz_pow_ui(traces.get_mpz_t(), Integer(static_cast<unsigned long>(v_size)).get_mpz_t(), static_cast<unsigned long>(k));
    traces *= 2;
    return bits_for(traces) + static_cast<std::size_t>(k + 1) * bits_for(Integer(static_cast<unsigned long>(v_size + 2 * static_cast<std::size_t>(k + 1))));
}

std::vector<bool> ContainerCode::bits() const {
    std::vector<bool> out;
    for (unsigned b = trace_bits; b > 0; --b) out.push_back(((trace_id >> (b - 1)) & 1u) != 0);
    for (int id : seq)
        for (unsigned b = id_bits; b > 0; --b) out.push_back(((static_cast<unsigned>(id) >> (b - 1)) & 1u) != 0);
    return out;
}

ContainerCode ContainerCode::from_bits(const std::vector<bool>& bits, unsigned tb, unsigned ib, std::size_t len) {
    if (bits.size() != tb + len * ib) throw std::invalid_argument("container code has wrong length");
    ContainerCode c;
    c.trace_bits = tb;
    c.id_bits = ib;
    std::size_t p = 0;
    for (unsigned b = 0; b < tb; ++b) c.trace_id = (c.trace_id << 1) | (bits[p++] ? 1u : 0u);
    for (std::size_t i = 0; i < len; ++i) {
        int id = 0;
        for (unsigned b = 0; b < ib; ++b) id = (id << 1) | (bits[p++] ? 1 : 0);
        c.seq.push_back(id);
    }
    return c;
}

bool verify_container(const PointSet& c, const PointSet& f, const Scalar& eps, std::size_t n) {
    if (!std::includes(c.begin(), c.end(), f.begin(), f.end())) return false;
    std::size_t extra = c.size() - f.size();
    return Scalar(static_cast<unsigned long>(extra)) <= eps * Scalar(static_cast<unsigned long>(n));
}

namespace {

// Net rows then box rows, in the variables (alpha_1..alpha_k, beta).
void dual_rows(const std::vector<Vec>& vpts, const Mask& inside, std::size_t k, const Scalar& margin, Mat& w,
               Vec& h) {
    for (std::size_t i = 0; i < vpts.size(); ++i) {
        Vec r(k + 1);
        bool neg = inside.test(i);
        for (std::size_t j = 0; j < k; ++j) r[j] = neg ? vpts[i][j] : Scalar(-vpts[i][j]);
        r[k] = neg ? -1 : 1;
        w.push_back(std::move(r));
        h.push_back(-margin);
    }
    for (std::size_t j = 0; j <= k; ++j)
        for (int s : {1, -1}) {
            Vec r(k + 1, Scalar(0));
            r[j] = s;
            w.push_back(std::move(r));
            h.push_back(1);
        }
}

// Largest t such that some (alpha, beta) in the unit box has <alpha,v> - beta <= -t on `neg`
// and >= t on `pos`.
Scalar optimal_box_margin(const std::vector<Vec>& neg, const std::vector<Vec>& pos, std::size_t k) {
    const std::size_t nv = k + 2;
    Mat w;
    Vec h;
    auto add = [&](const Vec& v, int s) {
        Vec r(nv, Scalar(0));
        for (std::size_t j = 0; j < k; ++j) r[j] = s * v[j];
        r[k] = -s;
        r[k + 1] = 1;
        w.push_back(r);
        h.push_back(0);
    };
    for (const auto& v : neg) add(v, 1);
    for (const auto& v : pos) add(v, -1);
    for (std::size_t j = 0; j <= k; ++j)
        for (int s : {1, -1}) {
            Vec r(nv, Scalar(0));
            r[j] = s;
            w.push_back(r);
            h.push_back(1);
        }
    Vec obj(nv, Scalar(0));
    obj[k + 1] = -1;
    auto res = lp::lexmin_vertex(w, h, {}, {obj}, Vec(nv, Scalar(0)));
    return res.x[k + 1];
}

Vec to_rational(const IVec& p) {
    Vec v;
    for (const auto& c : p) v.push_back(Scalar(c));
    return v;
}

}  // namespace

DualPolytope build_dual_polytope(const Halfspace& hs, const Domain& u, const PointSet& v) {
    PointSet vs = normalize_set(v, u.size());
    std::vector<Vec> vpts, neg, pos;
    Mask inside(vs.size());
    PointSet tr;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point& p = u.points[static_cast<std::size_t>(vs[i])];
        vpts.push_back(p);
        // A closed halfspace's trace is realised by some open one, which is all the rows describe.
        if (hs.contains(p)) {
            inside.set(i);
            neg.push_back(p);
            tr.push_back(vs[i]);
        } else {
            pos.push_back(p);
        }
    }
    const std::size_t k = static_cast<std::size_t>(u.dim);
    Scalar margin = vs.empty() ? Scalar(0) : Scalar(optimal_box_margin(neg, pos, k) / 2);
    Mat w;
    Vec h;
    dual_rows(vpts, inside, k, margin, w, h);
    return {Polytope::from_rows(u.dim + 1, w, h), tr, vs, margin};
}

ContainerSystem::ContainerSystem(const Domain& u, const Scalar& eps, ContainerConfig cfg)
    : u_(u), eps_(eps), cfg_(cfg) {
    if (eps <= 0 || eps > 1) throw std::invalid_argument("epsilon must lie in (0, 1]");
    frame_ = make_frame(u_.points);
    traces_ = enumerate_frame_traces(frame_.points, cfg_.trace_cap);
    for (std::size_t i = 0; i < traces_.size(); ++i) trace_lookup_.emplace(traces_[i].members, i);
    // Universal margin: half the smallest normalised margin over the canonical representatives,
    // rounded down to a power of two.
    Scalar smallest;
    bool have = false;
    for (const auto& t : traces_) {
        Scalar scale = abs_value(t.b);
        for (const auto& c : t.a) scale = std::max(scale, abs_value(c));
        Scalar m = t.lower_bound / scale;
        if (!have || m < smallest) {
            smallest = m;
            have = true;
        }
    }
    unsigned e = ceil_log2(Scalar(2) / smallest);
    Integer p = 1;
    p <<= e;
    margin_ = Scalar(1) / Scalar(p);
}

std::size_t ContainerSystem::trace_index(const Mask& members) const {
    auto it = trace_lookup_.find(members);
    if (it == trace_lookup_.end()) throw std::invalid_argument("set is not a halfspace trace of the domain");
    return it->second;
}

Point ContainerSystem::representative(std::size_t ti) const {
    const auto& t = traces_[ti];
    Scalar scale = abs_value(t.b);
    for (const auto& c : t.a) scale = std::max(scale, abs_value(c));
    Point r;
    for (const auto& c : t.a) r.push_back(c / scale);
    r.push_back(t.b / scale);
    return r;
}

void ContainerSystem::set_net(const PointSet& v) {
    v_ = normalize_set(v, u_.size());
    prepare_net();
}

void ContainerSystem::prepare_net() {
    vtraces_.clear();
    vtrace_lookup_.clear();
    engines_.clear();
    decoded_.clear();
    const int k = frame_.dim;
    if (v_.empty()) {
        vtraces_.push_back(Mask(0));
    } else {
        std::vector<Point> vp;
        for (int i : v_) vp.push_back(to_rational(frame_.points[static_cast<std::size_t>(i)]));
        AffineFrame vf = make_frame(vp);
        for (auto& t : enumerate_frame_traces(vf.points, cfg_.trace_cap)) vtraces_.push_back(std::move(t.members));
    }
    for (std::size_t i = 0; i < vtraces_.size(); ++i) vtrace_lookup_.emplace(vtraces_[i], i);
    Integer bound = 1;
    mpz_pow_ui(bound.get_mpz_t(), Integer(static_cast<unsigned long>(v_.size())).get_mpz_t(), static_cast<unsigned long>(k));
    bound *= 2;
    trace_bits_ = bits_for(bound);
    id_bits_ = bits_for(Integer(static_cast<unsigned long>(v_.size() + 2 * static_cast<std::size_t>(k + 1))));
    if (trace_bits_ > 62) throw CapExceeded("trace id does not fit in 62 bits");
}

DualPolytope ContainerSystem::dual_polytope(std::size_t vtrace_id) const {
    const std::size_t k = static_cast<std::size_t>(frame_.dim);
    std::vector<Vec> vp;
    for (int i : v_) vp.push_back(to_rational(frame_.points[static_cast<std::size_t>(i)]));
    Mat w;
    Vec h;
    dual_rows(vp, vtraces_.at(vtrace_id), k, margin_, w, h);
    PointSet tr;
    for (int li : vtraces_[vtrace_id].indices()) tr.push_back(v_[static_cast<std::size_t>(li)]);
    return {Polytope::from_rows(frame_.dim + 1, w, h), tr, v_, margin_};
}

BvtEngine& ContainerSystem::engine(std::size_t vid, const Point* inside) {
    auto it = engines_.find(vid);
    if (it != engines_.end()) return *it->second;
    DualPolytope dp = dual_polytope(vid);
    Point start;
    if (inside) {
        start = *inside;
    } else {
        auto f = lp_feasible(dp.poly);
        if (!f.feasible) throw std::logic_error("dual polytope is empty");
        start = f.witness;
    }
    std::vector<int> ids;
    for (std::size_t i = 0; i < dp.poly.size(); ++i) ids.push_back(static_cast<int>(i));
    auto eng = std::make_unique<BvtEngine>(dp.poly.normals(), dp.poly.bounds(), ids, frame_.dim + 1,
                                           std::vector<int>{}, start);
    return *engines_.emplace(vid, std::move(eng)).first->second;
}

ContainerCode ContainerSystem::encode_trace(std::size_t ti) {
    const Mask& f = traces_.at(ti).members;
    Mask fv(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i)
        if (f.test(static_cast<std::size_t>(v_[i]))) fv.set(i);
    auto vit = vtrace_lookup_.find(fv);
    if (vit == vtrace_lookup_.end()) throw std::logic_error("net trace missing from enumeration");
    Point rep = representative(ti);
    BvtEngine& eng = engine(vit->second, &rep);
    auto enc = eng.encode(rep);
    ContainerCode code;
    code.trace_id = vit->second;
    code.seq = enc.seq;
    code.trace_bits = trace_bits_;
    code.id_bits = id_bits_;
    if (!decoded_.count(code)) {
        // The chain's vertices are exactly what decoding recomputes from the cached pivots.
        Mask c(u_.size());
        for (std::size_t i = 0; i < u_.size(); ++i) {
            const IVec& p = frame_.points[i];
            for (const auto& x : enc.vertices) {
                Scalar g = -x.back();
                for (std::size_t j = 0; j < p.size(); ++j) g += x[j] * p[j];
                if (g < 0) {
                    c.set(i);
                    break;
                }
            }
        }
        decoded_.emplace(code, std::move(c));
    }
    return code;
}

ContainerCode ContainerSystem::encode(const Halfspace& h) {
    PointSet f = trace(h, u_);
    return encode_trace(trace_index(to_mask(f, u_.size())));
}

Mask ContainerSystem::decode(const ContainerCode& code) {
    auto it = decoded_.find(code);
    if (it != decoded_.end()) return it->second;
    if (code.trace_id >= vtraces_.size()) throw std::invalid_argument("container code: bad trace id");
    if (code.seq.size() != static_cast<std::size_t>(frame_.dim + 1))
        throw std::invalid_argument("container code: wrong sequence length");
    BvtEngine& eng = engine(static_cast<std::size_t>(code.trace_id), nullptr);
    for (int id : code.seq)
        if (id < 0 || static_cast<std::size_t>(id) >= eng.rows()) throw std::invalid_argument("container code: bad row id");
    auto verts = eng.decode(code.seq);
    Mask c(u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) {
        const IVec& p = frame_.points[i];
        for (const auto& x : verts) {
            Scalar g = -x.back();
            for (std::size_t j = 0; j < p.size(); ++j) g += x[j] * p[j];
            if (g < 0) {
                c.set(i);
                break;
            }
        }
    }
    decoded_.emplace(code, c);
    return c;
}

ContainerFamily ContainerSystem::build() {
    const std::size_t n = u_.size();
    const Scalar limit = eps_ * Scalar(static_cast<unsigned long>(n));
    // Seeded sample shared by both parties.
    std::size_t s = sampled_net_size(n, frame_.dim, eps_, cfg_.c0);
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::mt19937_64 rng(cfg_.seed ^ (0x9e3779b97f4a7c15ULL * n));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    v_.assign(order.begin(), order.begin() + static_cast<long>(s));
    std::sort(v_.begin(), v_.end());

    net_ = EpsNet{};
    net_.epsilon = eps_;
    net_.mode = cfg_.mode;
    std::vector<ContainerCode> codes(traces_.size());
    for (int round = 0;; ++round) {
        prepare_net();
        std::vector<Mask> excess;
        for (std::size_t ti = 0; ti < traces_.size(); ++ti) {
            codes[ti] = encode_trace(ti);
            const Mask& c = decoded_.at(codes[ti]);
            Mask extra = c.minus(traces_[ti].members);
            if (Scalar(static_cast<unsigned long>(extra.count())) > limit) excess.push_back(std::move(extra));
        }
        net_.total_violations = excess.size();
        if (cfg_.mode == NetMode::Sampled || excess.empty()) break;
        if (round >= cfg_.max_refinements) throw CapExceeded("net repair did not converge");
        // Greedy hitting set over the oversized leftovers, which all avoid the current net.
        std::vector<bool> hit(excess.size(), false);
        std::size_t left = excess.size();
        while (left > 0) {
            std::size_t best = n, best_cnt = 0;
            for (std::size_t p = 0; p < n; ++p) {
                std::size_t cnt = 0;
                for (std::size_t j = 0; j < excess.size(); ++j)
                    if (!hit[j] && excess[j].test(p)) ++cnt;
                if (cnt > best_cnt) {
                    best = p;
                    best_cnt = cnt;
                }
            }
            v_.push_back(static_cast<int>(best));
            for (std::size_t j = 0; j < excess.size(); ++j)
                if (!hit[j] && excess[j].test(best)) {
                    hit[j] = true;
                    --left;
                }
        }
        std::sort(v_.begin(), v_.end());
        ++net_.refinements;
    }
    net_.members = v_;
    if (cfg_.mode == NetMode::Sampled && !traces_.empty()) {
        std::mt19937_64 spot(cfg_.seed + 1);
        std::size_t checks = std::min(cfg_.spot_checks, traces_.size());
        for (std::size_t c = 0; c < checks; ++c) {
            std::size_t ti = checks == traces_.size() ? c : static_cast<std::size_t>(spot() % traces_.size());
            Mask extra = decoded_.at(codes[ti]).minus(traces_[ti].members);
            ++net_.spot_checked;
            if (Scalar(static_cast<unsigned long>(extra.count())) > limit) ++net_.spot_violations;
        }
    }

    ContainerFamily fam;
    fam.epsilon = eps_;
    fam.net = net_;
    fam.dim = frame_.dim;
    fam.margin = margin_;
    fam.trace_count = traces_.size();
    fam.code_bits = trace_bits_ + static_cast<std::size_t>(frame_.dim + 1) * id_bits_;
    std::vector<ContainerCode> sorted = codes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::unordered_map<Mask, bool, MaskHash> seen;
    for (const auto& code : sorted) {
        const Mask& m = decoded_.at(code);
        if (seen.count(m)) continue;
        seen.emplace(m, true);
        fam.containers.push_back({code, m.indices()});
        fam.masks.push_back(m);
    }
    return fam;
}

EpsNet build_eps_net(const Domain& u, const Scalar& eps, NetMode mode, ContainerConfig cfg) {
    cfg.mode = mode;
    ContainerSystem sys(u, eps, cfg);
    return sys.build().net;
}

ContainerCode encode_container(const Halfspace& h, const Domain& u, const EpsNet& net, ContainerConfig cfg) {
    ContainerSystem sys(u, net.epsilon, cfg);
    sys.set_net(net.members);
    return sys.encode(h);
}

PointSet decode_container(const ContainerCode& code, const Domain& u, const EpsNet& net, ContainerConfig cfg) {
    ContainerSystem sys(u, net.epsilon, cfg);
    sys.set_net(net.members);
    return sys.decode(code).indices();
}

ContainerFamily build_container_family(const Domain& u, const Scalar& eps, ContainerConfig cfg) {
    ContainerSystem sys(u, eps, cfg);
    return sys.build();
}

}  // namespace csd
