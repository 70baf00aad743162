#pragma once

#include "csd/caratheodory.hpp"
#include "csd/geom.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

namespace csd {

enum class NetMode { Exact, Sampled };

struct ContainerConfig {
    NetMode mode = NetMode::Exact;
    double c0 = 0.25;                 // constant in the sampled net size
    std::uint64_t seed = 0x5eedULL;   // shared by both parties
    std::size_t trace_cap = kDefaultTraceCap;
    std::size_t spot_checks = 256;    // sampled mode: traces re-verified per instance
    int max_refinements = 256;
};

struct EpsNet {
    PointSet members;  // V, as indices into U
    Scalar epsilon;
    NetMode mode = NetMode::Exact;
    std::size_t refinements = 0;      // exact mode: rounds of greedy hitting-set repair
    std::size_t spot_checked = 0;
    std::size_t spot_violations = 0;  // sampled mode: traces whose container is too large
    std::size_t total_violations = 0;
};

// Size of the seeded sample: ceil(c0 * k^2 * log2(k+1) * log2(1/eps) / eps), capped at n.
std::size_t sampled_net_size(std::size_t n, int k, const Scalar& eps, double c0);

struct DualPolytope {
    Polytope poly;       // rows: one per net point in order, then 2(k+1) box rows
    PointSet trace;      // V^- = H ∩ V
    PointSet net;        // V
    Scalar margin;       // the margin used in the net rows
};

// Standalone construction in U's own coordinates with margin = half the optimal L∞ margin of
// the trace on V.
DualPolytope build_dual_polytope(const Halfspace& h, const Domain& u, const PointSet& v);

struct ContainerCode {
    std::uint64_t trace_id = 0;
    BvtSequence seq;
    unsigned trace_bits = 0;
    unsigned id_bits = 0;

    std::size_t bit_length() const { return trace_bits + seq.size() * id_bits; }
    std::vector<bool> bits() const;
    static ContainerCode from_bits(const std::vector<bool>& bits, unsigned trace_bits, unsigned id_bits,
                                   std::size_t seq_len);
    bool operator<(const ContainerCode& o) const {
        return trace_id != o.trace_id ? trace_id < o.trace_id : seq < o.seq;
    }
    bool operator==(const ContainerCode& o) const { return trace_id == o.trace_id && seq == o.seq; }
};

// The bound trace_bits + (k+1) * id_bits for |V| = v_size.
std::size_t code_length_bound(std::size_t v_size, int k);

struct Container {
    ContainerCode code;
    PointSet members;
};

struct ContainerFamily {
    Scalar epsilon;
    EpsNet net;
    int dim = 0;                  // affine dimension of U
    Scalar margin;                // margin used in every dual polytope
    std::size_t trace_count = 0;  // |HS(U)|
    std::size_t code_bits = 0;    // fixed code width
    std::vector<Container> containers;  // distinct point sets, ascending code order
    std::vector<Mask> masks;            // containers[i] as a mask over U
};

// Builds the container machinery for one domain. Everything is a deterministic function of
// (U, epsilon, config), so both parties obtain identical objects without communicating.
class ContainerSystem {
public:
    ContainerSystem(const Domain& u, const Scalar& eps, ContainerConfig cfg = {});

    // Runs the net construction (sampling, then greedy repair in exact mode) and materialises the family.
    ContainerFamily build();
    // Fix V explicitly instead of building it.
    void set_net(const PointSet& v);

    ContainerCode encode(const Halfspace& h);
    ContainerCode encode_trace(std::size_t trace_index);
    Mask decode(const ContainerCode& code);

    const Domain& domain() const { return u_; }
    const AffineFrame& frame() const { return frame_; }
    const std::vector<FrameTrace>& traces() const { return traces_; }
    const Scalar& margin() const { return margin_; }
    const PointSet& net_members() const { return v_; }
    std::size_t trace_index(const Mask& members) const;
    // Dual polytope of a net trace in frame coordinates.
    DualPolytope dual_polytope(std::size_t vtrace_id) const;

private:
    void prepare_net();
    BvtEngine& engine(std::size_t vtrace_id, const Point* inside);
    Point representative(std::size_t trace_index) const;

    Domain u_;
    Scalar eps_;
    ContainerConfig cfg_;
    AffineFrame frame_;
    std::vector<FrameTrace> traces_;
    std::unordered_map<Mask, std::size_t, MaskHash> trace_lookup_;
    Scalar margin_;
    // net-dependent state
    PointSet v_;
    std::vector<Mask> vtraces_;
    std::unordered_map<Mask, std::size_t, MaskHash> vtrace_lookup_;
    std::map<std::size_t, std::unique_ptr<BvtEngine>> engines_;
    std::map<ContainerCode, Mask> decoded_;
    unsigned trace_bits_ = 0, id_bits_ = 0;
    EpsNet net_;
};

EpsNet build_eps_net(const Domain& u, const Scalar& eps, NetMode mode, ContainerConfig cfg = {});
ContainerCode encode_container(const Halfspace& h, const Domain& u, const EpsNet& net, ContainerConfig cfg = {});
PointSet decode_container(const ContainerCode& code, const Domain& u, const EpsNet& net, ContainerConfig cfg = {});
ContainerFamily build_container_family(const Domain& u, const Scalar& eps, ContainerConfig cfg = {});
// F ⊆ C and |C \ F| <= eps * n.
bool verify_container(const PointSet& c, const PointSet& f, const Scalar& eps, std::size_t n);

}  // namespace csd
