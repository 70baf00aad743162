#pragma once

#include "csd/containers.hpp"
#include "csd/protocols.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace csd {

using Json = nlohmann::json;

// Scalars travel as "p/q" strings; domains as {"dim", "points": [["p/q", ...], ...]}.
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);
Json to_json(const Domain& u);
Domain domain_from_json(const Json& j);
Json to_json(const Halfspace& h);
Json to_json(const ContainerCode& c);
Json to_json(const ContainerFamily& f);
Json to_json(const Transcript& t);
Json to_json(const ProtocolOutcome& o);
Json to_json(const CsdOutcome& o);
Json to_json(const LearningOutcome& o);

struct Instance {
    std::string id;
    std::string task = "promise-csd";  // promise-csd | csd | learn
    Domain domain;
    PointSet alice, bob;               // set tasks
    Sample alice_sample, bob_sample;   // learn
    Scalar epsilon = Scalar(1, 4);
    std::uint64_t seed = 0x5eedULL;
};

Json to_json(const Instance& inst);
// Throws std::invalid_argument on malformed input.
Instance instance_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace csd
