#pragma once

#include "csd/containers.hpp"
#include "csd/io.hpp"
#include "csd/protocols.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace csd {

struct Caps {
    std::size_t max_n = 512;
    int max_d = 6;
    std::size_t max_family = 1'000'000;
    std::size_t max_instances = 1'000'000;
};

// Overrides from CSD_CAP_N, CSD_CAP_D, CSD_CAP_FAMILY and CSD_CAP_INSTANCES.
Caps caps_from_env(Caps base = {});

struct ExperimentConfig {
    std::string task = "promise-csd";  // promise-csd | csd | learn | containers | hardness-sweep | bvt-check
    std::string input;                 // instance file; replaces the generator when set
    std::string generator = "line";    // line | parabola | grid | moment | random
    std::size_t n = 8;
    int d = 1;
    Scalar epsilon = Scalar(1, 4);
    std::vector<Scalar> eps_list;      // containers task; defaults to 1/2, 1/4, 1/8
    std::uint64_t seed = 0x5eedULL;
    std::size_t count = 0;             // 0: exhaustive where the task allows it
    int k = 2, c = 1;                  // hardness sweep block shape
    bool verify = true;
    bool timing = false;               // off keeps output byte-identical across runs
    NetMode net_mode = NetMode::Exact;
    Caps caps;
};

struct RunRecord {
    std::string instance_id;
    std::size_t n = 0;
    int d = 0;
    Scalar eps;
    int decision = 0;
    std::optional<int> oracle;
    std::size_t bits = 0;
    std::size_t rounds = 0;
    std::vector<std::size_t> family_sizes;
    double time_ms = 0;
    bool flagged = false;  // decision disagrees with oracle
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::size_t mismatches = 0;
    Json summary;
    std::optional<Json> offending;  // first flagged instance
};

// Throws std::invalid_argument for unknown generators or parameters outside the caps.
Domain make_domain(const std::string& generator, std::size_t n, int d, std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Columns: instance_id,n,d,eps,decision,oracle,bits,rounds,time_ms.
std::string records_csv(const std::vector<RunRecord>& records);
Json records_json(const std::vector<RunRecord>& records);

struct ScalingReport {
    std::vector<RunRecord> records;
    double c_fit = 0;      // max of bits / (d log2(d+1) log2 n) over promise runs
    double c_max = 0;
    bool bounded = true;   // c_fit <= c_max
    bool monotone = true;  // mean bits non-decreasing in n for each d
    std::vector<std::pair<std::pair<int, std::size_t>, double>> mean_bits;  // ((d, n), mean)
};

// task: "promise" or "csd". `per_point` seeded instances per (d, n), half separable, half sharing a point.
ScalingReport bits_scaling_report(const std::string& task, const std::vector<std::size_t>& ns,
                                  const std::vector<int>& ds, std::uint64_t seed, std::size_t per_point,
                                  double c_max, ContainerConfig containers = {});

// Seeded instance generators shared by the harness and the tests.
// Box [-4,4]^d plus `cuts` random halfspaces keeping the origin strictly inside.
Polytope random_polytope(int d, std::size_t cuts, std::mt19937_64& rng);
// Positive random weights over the given vertices.
Point random_interior_point(const std::vector<Point>& vertices, std::mt19937_64& rng);
// X below a random hyperplane, Y above it; both nonempty when n >= 2.
std::pair<PointSet, PointSet> random_separable_pair(const Domain& u, std::mt19937_64& rng);
// Two random sets sharing at least one point.
std::pair<PointSet, PointSet> random_intersecting_pair(const Domain& u, std::mt19937_64& rng);
// Labels of a random halfspace with no domain point on its boundary.
std::vector<int> random_halfspace_labels(const Domain& u, std::mt19937_64& rng);

}  // namespace csd
