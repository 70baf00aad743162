#include "csd/protocols.hpp"

#include <algorithm>
#include <stdexcept>

namespace csd {

void Transcript::append(Message m) {
    total_bits += m.payload.size();
    messages.push_back(std::move(m));
}

void Transcript::extend(const Transcript& other) {
    for (const auto& m : other.messages) append(m);
}

std::size_t transcript_bits(const Transcript& t) {
    std::size_t s = 0;
    for (const auto& m : t.messages) s += m.payload.size();
    return s;
}

std::size_t transcript_bits(const ProtocolOutcome& o) { return transcript_bits(o.transcript); }

ProtocolEngine::ProtocolEngine(ProtocolConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.epsilon <= 0 || cfg_.epsilon > Scalar(1, 4))
        throw std::invalid_argument("protocol epsilon must lie in (0, 1/4]");
}

std::shared_ptr<const ContainerFamily> ProtocolEngine::family(const Domain& u) {
    auto it = families_.find(u.points);
    if (it != families_.end()) return it->second;
    auto fam = std::make_shared<const ContainerFamily>(build_container_family(u, cfg_.epsilon, cfg_.containers));
    families_.emplace(u.points, fam);
    return fam;
}

const Domain& ProtocolEngine::auxiliary_domain(const Domain& u) {
    auto it = aux_.find(u.points);
    if (it != aux_.end()) return it->second;
    return aux_.emplace(u.points, build_auxiliary_domain(u, cfg_.aux_cap)).first->second;
}

const std::vector<FrameTrace>& ProtocolEngine::traces(const Domain& u) {
    auto it = traces_.find(u.points);
    if (it != traces_.end()) return it->second;
    AffineFrame fr = make_frame(u.points);
    return traces_.emplace(u.points, enumerate_frame_traces(fr.points, cfg_.containers.trace_cap)).first->second;
}

const PointSet& ProtocolEngine::mapped(const Domain& u, const PointSet& s) {
    auto key = std::make_pair(u.points, normalize_set(s, u.size()));
    auto it = mapped_.find(key);
    if (it != mapped_.end()) return it->second;
    PointSet m = hull_members(u, key.second, auxiliary_domain(u));
    return mapped_.emplace(std::move(key), std::move(m)).first->second;
}

// --- promise protocol ---------------------------------------------------------------------

PromiseParty::PromiseParty(Party role, const Domain& u, const PointSet& own, ProtocolEngine& engine)
    : role_(role),
      u_(u),
      engine_(engine),
      u_mask_(Mask::full(u.size())),
      own_(to_mask(normalize_set(own, u.size()), u.size())),
      labels_(u.size(), 0) {
    finished_ = u.size() == 0;
    decision_ = 1;
}

void PromiseParty::load_family() {
    if (family_) return;
    local_ = u_mask_.indices();
    family_ = engine_.family(u_.subdomain(local_));
    by_code_.clear();
    for (std::size_t i = 0; i < family_->containers.size(); ++i) by_code_.emplace(family_->containers[i].code, i);
}

std::optional<std::size_t> PromiseParty::search() const {
    const std::size_t m = local_.size();
    Mask mine(m);
    for (std::size_t i = 0; i < m; ++i)
        if (own_.test(static_cast<std::size_t>(local_[i]))) mine.set(i);
    // |C| <= (1/2 + eps)|U_i|, which is 3/4 at the default eps.
    const Scalar limit = (Scalar(1, 2) + engine_.config().epsilon) * Scalar(static_cast<unsigned long>(m));
    for (std::size_t c = 0; c < family_->masks.size(); ++c) {
        const Mask& cm = family_->masks[c];
        if (Scalar(static_cast<unsigned long>(cm.count())) <= limit && mine.subset_of(cm)) return c;
    }
    return std::nullopt;
}

std::size_t PromiseParty::read_code(const std::vector<bool>& payload, std::size_t offset) const {
    const ContainerCode& shape = family_->containers.front().code;
    std::vector<bool> bits(payload.begin() + static_cast<long>(offset), payload.end());
    ContainerCode code = ContainerCode::from_bits(bits, shape.trace_bits, shape.id_bits, shape.seq.size());
    auto it = by_code_.find(code);
    if (it == by_code_.end()) throw std::invalid_argument("received code names no container of the family");
    return it->second;
}

void PromiseParty::apply(Party chooser, std::size_t container) {
    const Mask& cm = family_->masks[container];
    const int label = chooser == Party::Alice ? 1 : -1;
    for (std::size_t i = 0; i < local_.size(); ++i) {
        if (cm.test(i)) continue;
        auto g = static_cast<std::size_t>(local_[i]);
        labels_[g] = label;
        u_mask_.reset(g);
        own_.reset(g);
    }
    family_.reset();
    alice_choice_.reset();
    alice_found_ = false;
    phase_ = 0;
    if (u_mask_.none()) finished_ = true;
}

Message PromiseParty::speak() {
    if (finished_) throw std::logic_error("party already finished");
    load_family();
    Message m;
    m.sender = role_;
    auto put_code = [&](std::size_t c) {
        for (bool b : family_->containers[c].code.bits()) m.payload.push_back(b);
    };
    if (phase_ == 0) {
        if (role_ != Party::Alice) throw std::logic_error("Alice opens every round");
        alice_choice_ = search();
        alice_found_ = alice_choice_.has_value();
        m.payload.push_back(alice_found_);
        if (alice_found_) put_code(*alice_choice_);
        m.tag = alice_found_ ? "alice-container" : "alice-none";
        phase_ = 1;
        return m;
    }
    if (role_ != Party::Bob) throw std::logic_error("Bob closes every round");
    if (alice_found_) {
        m.payload.push_back(false);
        m.tag = "bob-ack";
        apply(Party::Alice, *alice_choice_);
        return m;
    }
    auto mine = search();
    m.payload.push_back(mine.has_value());
    if (mine) {
        put_code(*mine);
        m.tag = "bob-container";
        apply(Party::Bob, *mine);
    } else {
        m.tag = "bob-none";
        finished_ = true;
        decision_ = 0;
    }
    return m;
}

void PromiseParty::hear(const Message& m) {
    if (finished_) throw std::logic_error("party already finished");
    if (m.payload.empty()) throw std::invalid_argument("empty message");
    load_family();
    if (phase_ == 0) {
        alice_found_ = m.payload[0];
        if (alice_found_) alice_choice_ = read_code(m.payload, 1);
        phase_ = 1;
        return;
    }
    if (alice_found_) {
        apply(Party::Alice, *alice_choice_);
    } else if (m.payload[0]) {
        apply(Party::Bob, read_code(m.payload, 1));
    } else {
        finished_ = true;
        decision_ = 0;
    }
}

PromiseCsdSession::PromiseCsdSession(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine)
    : u_(u), alice_(Party::Alice, u, x, engine), bob_(Party::Bob, u, y, engine) {}

bool PromiseCsdSession::done() const { return alice_.finished() && bob_.finished(); }

const Message& PromiseCsdSession::step() {
    if (done()) throw std::logic_error("session finished");
    if (alice_next_) {
        RoundRecord r;
        r.u_size = alice_.remaining().count();
        r.x_size = alice_.own().count();
        r.y_size = bob_.own().count();
        r.shared = (alice_.own() & bob_.own()).count();
        Message m = alice_.speak();
        bob_.hear(m);
        r.family_size = alice_.current_family()->containers.size();
        r.code_bits = alice_.current_family()->code_bits;
        r.payload_bits = m.payload.size();
        rounds_.push_back(r);
        transcript_.append(std::move(m));
    } else {
        Message m = bob_.speak();
        alice_.hear(m);
        RoundRecord& r = rounds_.back();
        r.payload_bits += m.payload.size();
        if (m.tag == "bob-ack") r.chooser = Party::Alice;
        if (m.tag == "bob-container") r.chooser = Party::Bob;
        if (r.chooser) r.container_size = alice_.remaining().count();
        transcript_.append(std::move(m));
    }
    alice_next_ = !alice_next_;
    return transcript_.messages.back();
}

ProtocolOutcome PromiseCsdSession::outcome() const {
    if (!done()) throw std::logic_error("session still running");
    if (alice_.decision() != bob_.decision() || alice_.labels() != bob_.labels())
        throw std::logic_error("parties disagree");
    ProtocolOutcome o;
    o.decision = alice_.decision();
    if (o.decision == 1) o.labels = alice_.labels();
    o.transcript = transcript_;
    o.rounds = rounds_;
    return o;
}

ProtocolOutcome run_promise_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine) {
    PromiseCsdSession s(u, x, y, engine);
    while (!s.done()) s.step();
    return s.outcome();
}

ProtocolOutcome run_promise_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolConfig cfg) {
    ProtocolEngine engine(std::move(cfg));
    return run_promise_csd(u, x, y, engine);
}

// --- reduction to the promise problem --------------------------------------------------

Domain build_auxiliary_domain(const Domain& u, std::size_t cap) {
    const int n = static_cast<int>(u.size());
    const int limit = u.dim + 2;
    // All subsets of size 1..d+1 in (size, lexicographic) order.
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    for (int size = 1; size <= std::min(limit - 1, n); ++size) {
        cur.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i;
        while (true) {
            subsets.push_back(cur);
            int i = size - 1;
            while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++cur[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
            if (subsets.size() > cap) throw CapExceeded("auxiliary domain: too many subsets");
        }
    }
    std::vector<Point> extra;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        for (std::size_t b = a; b < subsets.size(); ++b) {
            const auto& s1 = subsets[a];
            const auto& s2 = subsets[b];
            if (static_cast<int>(s1.size() + s2.size()) > limit) continue;
            if (++pairs > cap) throw CapExceeded("auxiliary domain: too many subset pairs");
            std::vector<Point> p1, p2;
            for (int i : s1) p1.push_back(u.points[static_cast<std::size_t>(i)]);
            for (int i : s2) p2.push_back(u.points[static_cast<std::size_t>(i)]);
            auto hi = hulls_intersect(p1, p2);
            if (hi.intersecting) extra.push_back(std::move(hi.witness));
        }
    }
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    std::vector<Point> pts = u.points;
    std::vector<Point> sorted_u = u.points;
    std::sort(sorted_u.begin(), sorted_u.end());
    for (auto& p : extra)
        if (!std::binary_search(sorted_u.begin(), sorted_u.end(), p)) pts.push_back(std::move(p));
    return Domain(u.dim, std::move(pts));
}

PointSet hull_members(const Domain& u, const PointSet& s, const Domain& v) {
    PointSet out;
    if (s.empty()) return out;
    std::vector<Point> pts;
    for (int i : normalize_set(s, u.size())) pts.push_back(u.points[static_cast<std::size_t>(i)]);
    for (std::size_t j = 0; j < v.size(); ++j) {
        const Point& p = v.points[j];
        bool in = std::find(pts.begin(), pts.end(), p) != pts.end() || convex_combination(p, pts).has_value();
        if (in) out.push_back(static_cast<int>(j));
    }
    return out;
}

CsdOutcome run_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine) {
    const Domain& v = engine.auxiliary_domain(u);
    CsdOutcome o;
    o.aux_size = v.size();
    // Each side maps its own input locally.
    o.alice_mapped = engine.mapped(u, x);
    o.bob_mapped = engine.mapped(u, y);
    o.promise = run_promise_csd(v, o.alice_mapped, o.bob_mapped, engine);
    o.decision = o.promise.decision;
    if (o.promise.labels) o.labels = std::vector<int>(o.promise.labels->begin(), o.promise.labels->begin() + static_cast<long>(u.size()));
    return o;
}

CsdOutcome run_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolConfig cfg) {
    ProtocolEngine engine(std::move(cfg));
    return run_csd(u, x, y, engine);
}

// --- learning ----------------------------------------------------------------------------

namespace {

struct Split {
    Mask pos, neg;
};

Split split(const Sample& s, std::size_t n) {
    Split out{Mask(n), Mask(n)};
    for (auto [i, label] : s) {
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw std::invalid_argument("sample index out of range");
        if (label == 1) {
            out.pos.set(static_cast<std::size_t>(i));
        } else if (label == -1) {
            out.neg.set(static_cast<std::size_t>(i));
        } else {
            throw std::invalid_argument("labels must be +1 or -1");
        }
    }
    return out;
}

// Largest consistent trace: the last one in canonical order, so unlabeled points lean positive.
std::optional<std::size_t> separating_trace(const std::vector<FrameTrace>& traces, const Mask& pos, const Mask& neg) {
    for (std::size_t t = traces.size(); t-- > 0;)
        if (pos.subset_of(traces[t].members) && !neg.intersects(traces[t].members)) return t;
    return std::nullopt;
}

Message index_message(Party p, std::size_t index, unsigned width, std::string tag) {
    Message m{p, {}, std::move(tag)};
    for (unsigned b = width; b > 0; --b) m.payload.push_back(((index >> (b - 1)) & 1u) != 0);
    return m;
}

}  // namespace

LearningOutcome run_learning(const Sample& alice, const Sample& bob, const Domain& u, ProtocolEngine& engine) {
    const std::size_t n = u.size();
    Split a = split(alice, n), b = split(bob, n);
    LearningOutcome out;

    ProtocolOutcome first = run_promise_csd(u, a.neg.indices(), b.pos.indices(), engine);
    out.promise_bits[0] = transcript_bits(first);
    out.transcript.extend(first.transcript);
    if (first.decision == 0) return out;
    ProtocolOutcome second = run_promise_csd(u, a.pos.indices(), b.neg.indices(), engine);
    out.promise_bits[1] = transcript_bits(second);
    out.transcript.extend(second.transcript);
    if (second.decision == 0) return out;

    Hypothesis& h = out.hypothesis;
    h.g = *first.labels;
    h.f = *second.labels;
    for (int& v : h.f) v = -v;
    h.alice_region = Mask(n);
    h.bob_region = Mask(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (h.f[i] == 1 && h.g[i] == -1) h.alice_region.set(i);
        if (h.f[i] == -1 && h.g[i] == 1) h.bob_region.set(i);
    }

    const auto& traces = engine.traces(u);
    Integer count;
    mpz_pow_ui(count.get_mpz_t(), Integer(static_cast<unsigned long>(n)).get_mpz_t(), static_cast<unsigned long>(u.dim));
    count *= 2;
    const unsigned width = bits_for(count);
    out.indicator_bits = 2 * width;

    auto ia = separating_trace(traces, a.pos & h.alice_region, a.neg & h.alice_region);
    if (!ia) return out;
    out.transcript.append(index_message(Party::Alice, *ia, width, "alice-indicator"));
    auto ib = separating_trace(traces, b.pos & h.bob_region, b.neg & h.bob_region);
    if (!ib) return out;
    out.transcript.append(index_message(Party::Bob, *ib, width, "bob-indicator"));
    h.alice_indicator = *ia;
    h.bob_indicator = *ib;

    h.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (h.f[i] == h.g[i]) {
            h.labels[i] = h.f[i];
        } else if (h.alice_region.test(i)) {
            h.labels[i] = traces[*ia].members.test(i) ? 1 : -1;
        } else {
            h.labels[i] = traces[*ib].members.test(i) ? 1 : -1;
        }
    }
    out.ok = true;
    return out;
}

LearningOutcome run_learning(const Sample& alice, const Sample& bob, const Domain& u, ProtocolConfig cfg) {
    ProtocolEngine engine(std::move(cfg));
    return run_learning(alice, bob, u, engine);
}

}  // namespace csd
