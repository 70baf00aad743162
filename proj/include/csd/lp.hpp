#pragma once

#include "csd/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

// Exact linear algebra and the two simplex engines used throughout.
namespace csd::lp {

struct UnboundedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<Vec> solve_square(Mat a, Vec b);
std::optional<Mat> inverse(const Mat& a);
std::size_t rank(Mat a);
// Basis of {x in Q^cols : a x = 0}, one vector per free column of the reduced row echelon form.
std::vector<Vec> null_space(const Mat& a, std::size_t cols);
// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& a, std::size_t cols);

enum class Status { Optimal, Infeasible, Unbounded };

struct StdResult {
    Status status = Status::Infeasible;
    Vec x;
};

// Minimise the objectives lexicographically over {x >= 0 : a x = b} with Bland's rule.
// An empty objective list only decides feasibility.
StdResult solve_standard(const Mat& a, const Vec& b, const std::vector<Vec>& objectives);

struct VertexResult {
    Vec x;
    std::vector<int> basis;  // row ids tight and linearly independent at x
};

// Active-set simplex on {x : w x <= h} with rows in `eq` forced tight. Starts from the feasible
// point x0, walks to a vertex and pivots with Bland's rule until the objectives are
// lexicographically minimal. Requires a pointed region; throws UnboundedError otherwise.
VertexResult lexmin_vertex(const Mat& w, const Vec& h, const std::vector<int>& eq,
                           const std::vector<Vec>& objectives, Vec x0);

// Objectives e_1..e_D: the lexicographically smallest point of the region.
VertexResult lexmin_point(const Mat& w, const Vec& h, const std::vector<int>& eq, Vec x0);

}  // namespace csd::lp
