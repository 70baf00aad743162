#include "csd/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csd {

Json to_json(const Scalar& s) { return to_string(s); }

Scalar scalar_from_json(const Json& j) {
    if (j.is_string()) return parse_scalar(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<long>());
    throw std::invalid_argument("scalar must be a \"p/q\" string or an integer");
}

Json to_json(const Domain& u) {
    Json pts = Json::array();
    for (const auto& p : u.points) {
        Json row = Json::array();
        for (const auto& c : p) row.push_back(to_json(c));
        pts.push_back(std::move(row));
    }
    return {{"dim", u.dim}, {"points", std::move(pts)}};
}

Domain domain_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("points")) throw std::invalid_argument("domain needs dim and points");
    std::vector<Point> pts;
    for (const auto& row : j.at("points")) {
        Point p;
        for (const auto& c : row) p.push_back(scalar_from_json(c));
        pts.push_back(std::move(p));
    }
    return Domain(j.at("dim").get<int>(), std::move(pts));
}

Json to_json(const Halfspace& h) {
    Json n = Json::array();
    for (const auto& c : h.normal) n.push_back(to_json(c));
    return {{"normal", std::move(n)}, {"bias", to_json(h.bias)}, {"closed", h.closed}};
}

namespace {

std::string bit_string(const std::vector<bool>& bits) {
    std::string s;
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

PointSet set_from_json(const Json& j) {
    PointSet s;
    for (const auto& v : j) s.push_back(v.get<int>());
    return s;
}

Sample sample_from_json(const Json& j, std::size_t n) {
    Sample s;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("sample entries are [index, label]");
        int i = e[0].get<int>(), y = e[1].get<int>();
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw std::invalid_argument("sample index out of range");
        if (y != 1 && y != -1) throw std::invalid_argument("sample labels are -1 or 1");
        s.emplace_back(i, y);
    }
    return s;
}

Json labels_json(const std::optional<std::vector<int>>& labels) {
    return labels ? Json(*labels) : Json(nullptr);
}

}  // namespace

Json to_json(const ContainerCode& c) {
    return {{"trace_id", c.trace_id}, {"sequence", c.seq}, {"bits", bit_string(c.bits())}};
}

Json to_json(const ContainerFamily& f) {
    Json cs = Json::array();
    for (const auto& c : f.containers) cs.push_back({{"code", to_json(c.code)}, {"members", c.members}});
    return {{"epsilon", to_json(f.epsilon)},
            {"net", f.net.members},
            {"net_refinements", f.net.refinements},
            {"dim", f.dim},
            {"margin", to_json(f.margin)},
            {"trace_count", f.trace_count},
            {"code_bits", f.code_bits},
            {"containers", std::move(cs)}};
}

Json to_json(const Transcript& t) {
    Json ms = Json::array();
    for (const auto& m : t.messages)
        ms.push_back({{"sender", m.sender == Party::Alice ? "alice" : "bob"}, {"tag", m.tag}, {"bits", bit_string(m.payload)}});
    return ms;
}

Json to_json(const ProtocolOutcome& o) {
    Json rounds = Json::array();
    for (const auto& r : o.rounds)
        rounds.push_back({{"u_size", r.u_size},
                          {"family_size", r.family_size},
                          {"code_bits", r.code_bits},
                          {"payload_bits", r.payload_bits},
                          {"chooser", !r.chooser ? "none" : *r.chooser == Party::Alice ? "alice" : "bob"}});
    return {{"decision", o.decision},
            {"h", labels_json(o.labels)},
            {"bits", transcript_bits(o)},
            {"rounds", o.rounds.size()},
            {"per_round", std::move(rounds)},
            {"transcript", to_json(o.transcript)}};
}

Json to_json(const CsdOutcome& o) {
    Json j = to_json(o.promise);
    j["h"] = labels_json(o.labels);
    j["aux_size"] = o.aux_size;
    j["alice_mapped"] = o.alice_mapped;
    j["bob_mapped"] = o.bob_mapped;
    return j;
}

Json to_json(const LearningOutcome& o) {
    Json j = {{"ok", o.ok},
              {"bits", transcript_bits(o.transcript)},
              {"promise_bits", {o.promise_bits[0], o.promise_bits[1]}},
              {"indicator_bits", o.indicator_bits},
              {"transcript", to_json(o.transcript)}};
    if (o.ok) {
        j["h"] = o.hypothesis.labels;
        j["f"] = o.hypothesis.f;
        j["g"] = o.hypothesis.g;
        j["alice_indicator"] = o.hypothesis.alice_indicator;
        j["bob_indicator"] = o.hypothesis.bob_indicator;
    }
    return j;
}

Json to_json(const Instance& inst) {
    Json j = {{"id", inst.id},
              {"task", inst.task},
              {"domain", to_json(inst.domain)},
              {"epsilon", to_json(inst.epsilon)},
              {"seed", inst.seed}};
    if (inst.task == "learn") {
        Json a = Json::array(), b = Json::array();
        for (auto [i, l] : inst.alice_sample) a.push_back({i, l});
        for (auto [i, l] : inst.bob_sample) b.push_back({i, l});
        j["alice_sample"] = std::move(a);
        j["bob_sample"] = std::move(b);
    } else {
        j["alice_set"] = inst.alice;
        j["bob_set"] = inst.bob;
    }
    return j;
}

Instance instance_from_json(const Json& j) {
    try {
        Instance inst;
        inst.id = j.value("id", std::string{});
        inst.task = j.value("task", std::string{"promise-csd"});
        inst.domain = domain_from_json(j.at("domain"));
        if (j.contains("epsilon")) inst.epsilon = scalar_from_json(j.at("epsilon"));
        if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
        if (inst.task == "learn") {
            inst.alice_sample = sample_from_json(j.at("alice_sample"), inst.domain.size());
            inst.bob_sample = sample_from_json(j.at("bob_sample"), inst.domain.size());
        } else if (inst.task == "promise-csd" || inst.task == "csd") {
            inst.alice = normalize_set(set_from_json(j.at("alice_set")), inst.domain.size());
            inst.bob = normalize_set(set_from_json(j.at("bob_set")), inst.domain.size());
        } else {
            throw std::invalid_argument("unknown instance task: " + inst.task);
        }
        return inst;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed instance: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw std::invalid_argument(std::string("malformed instance: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace csd
