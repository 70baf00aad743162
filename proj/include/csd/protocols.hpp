#pragma once

#include "csd/containers.hpp"
#include "csd/geom.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace csd {

enum class Party { Alice, Bob };

struct Message {
    Party sender = Party::Alice;
    std::vector<bool> payload;
    std::string tag;
};

struct Transcript {
    std::vector<Message> messages;
    std::size_t total_bits = 0;

    void append(Message m);
    // Concatenates another run's messages, e.g. a sub-protocol.
    void extend(const Transcript& other);
};

struct RoundRecord {
    std::size_t u_size = 0;
    std::size_t x_size = 0;
    std::size_t y_size = 0;
    std::size_t shared = 0;        // |X_i ∩ Y_i|
    std::size_t family_size = 0;
    std::size_t code_bits = 0;
    std::optional<Party> chooser;  // empty when neither party found a container
    std::size_t container_size = 0;
    std::size_t payload_bits = 0;
};

struct ProtocolOutcome {
    int decision = 0;
    std::optional<std::vector<int>> labels;  // ±1 per domain point when decision = 1
    Transcript transcript;
    std::vector<RoundRecord> rounds;
};

struct ProtocolConfig {
    Scalar epsilon = Scalar(1, 4);
    ContainerConfig containers;
    std::size_t aux_cap = 200'000;  // guard on |S1|+|S2| <= d+2 pair enumeration
};

// Shared, communication-free machinery: container families per sub-domain, auxiliary domains
// and halfspace trace lists. Each cache is a pure function of its key.
class ProtocolEngine {
public:
    explicit ProtocolEngine(ProtocolConfig cfg = {});

    const ProtocolConfig& config() const { return cfg_; }
    std::shared_ptr<const ContainerFamily> family(const Domain& u);
    const Domain& auxiliary_domain(const Domain& u);
    const std::vector<FrameTrace>& traces(const Domain& u);
    // conv(u[s]) ∩ auxiliary_domain(u), the local map of the reduction.
    const PointSet& mapped(const Domain& u, const PointSet& s);
    std::size_t families_built() const { return families_.size(); }

private:
    ProtocolConfig cfg_;
    std::map<std::vector<Point>, std::shared_ptr<const ContainerFamily>> families_;
    std::map<std::vector<Point>, Domain> aux_;
    std::map<std::vector<Point>, std::vector<FrameTrace>> traces_;
    std::map<std::pair<std::vector<Point>, PointSet>, PointSet> mapped_;
};

// One side of the promise protocol. A party sees the shared domain, its own set and the
// messages it receives; nothing else.
class PromiseParty {
public:
    PromiseParty(Party role, const Domain& u, const PointSet& own, ProtocolEngine& engine);

    bool finished() const { return finished_; }
    Message speak();
    void hear(const Message& m);

    int decision() const { return decision_; }
    const std::vector<int>& labels() const { return labels_; }
    const Mask& remaining() const { return u_mask_; }
    const Mask& own() const { return own_; }
    // Details of the current round's family, valid after the round's first message.
    const ContainerFamily* current_family() const { return family_.get(); }

private:
    std::optional<std::size_t> search() const;
    void load_family();
    void apply(Party chooser, std::size_t container);
    std::size_t read_code(const std::vector<bool>& payload, std::size_t offset) const;

    Party role_;
    const Domain& u_;
    ProtocolEngine& engine_;
    Mask u_mask_, own_;
    std::vector<int> local_;  // local index -> domain index for the current sub-domain
    std::shared_ptr<const ContainerFamily> family_;
    std::map<ContainerCode, std::size_t> by_code_;
    std::vector<int> labels_;
    std::optional<std::size_t> alice_choice_;
    bool alice_found_ = false;
    int phase_ = 0;  // 0: Alice's turn in this round, 1: Bob's
    bool finished_ = false;
    int decision_ = 0;
};

// Drives both parties message by message.
class PromiseCsdSession {
public:
    PromiseCsdSession(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine);
    bool done() const;
    // Delivers one message; returns it.
    const Message& step();
    ProtocolOutcome outcome() const;

private:
    const Domain& u_;
    PromiseParty alice_, bob_;
    Transcript transcript_;
    std::vector<RoundRecord> rounds_;
    bool alice_next_ = true;
};

ProtocolOutcome run_promise_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine);
ProtocolOutcome run_promise_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolConfig cfg = {});

// U first (indices preserved), then one canonical witness per intersecting pair S1, S2 with
// |S1| + |S2| <= d + 2, lexicographically sorted and deduplicated.
Domain build_auxiliary_domain(const Domain& u, std::size_t cap = 200'000);
// Points of `v` inside conv(u[s]).
PointSet hull_members(const Domain& u, const PointSet& s, const Domain& v);

struct CsdOutcome {
    ProtocolOutcome promise;  // the run on the auxiliary domain
    int decision = 0;
    std::optional<std::vector<int>> labels;  // restricted to U
    std::size_t aux_size = 0;
    PointSet alice_mapped, bob_mapped;
};

CsdOutcome run_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolEngine& engine);
CsdOutcome run_csd(const Domain& u, const PointSet& x, const PointSet& y, ProtocolConfig cfg = {});

using Sample = std::vector<std::pair<int, int>>;  // (point index, ±1)

struct Hypothesis {
    std::vector<int> labels;
    std::vector<int> f, g;   // the two sub-protocol outputs, f already negated
    std::size_t alice_indicator = 0, bob_indicator = 0;  // trace indices
    Mask alice_region, bob_region;  // F+ ∩ G-, F- ∩ G+
};

struct LearningOutcome {
    bool ok = false;  // false: a sub-protocol output 0
    Hypothesis hypothesis;
    Transcript transcript;
    std::size_t promise_bits[2] = {0, 0};
    std::size_t indicator_bits = 0;
};

LearningOutcome run_learning(const Sample& alice, const Sample& bob, const Domain& u, ProtocolEngine& engine);
LearningOutcome run_learning(const Sample& alice, const Sample& bob, const Domain& u, ProtocolConfig cfg = {});

std::size_t transcript_bits(const Transcript& t);
std::size_t transcript_bits(const ProtocolOutcome& o);

}  // namespace csd
