#pragma once

#include <optional>
#include <vector>

#include "lipsel/rational.hpp"

namespace lipsel {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

Rat dot(const Vec& a, const Vec& b);
Vec vadd(const Vec& a, const Vec& b);
Vec vsub(const Vec& a, const Vec& b);
Vec vscale(const Vec& a, const Rat& s);
bool is_zero_vec(const Vec& a);

// Three-way lexicographic comparison, used for all canonical orderings.
int lex_cmp(const Vec& a, const Vec& b);

// In-place reduced row echelon form; returns the rank. Pivoting picks the
// first nonzero entry in column order, so the result is deterministic.
int rref(Mat& m);

int rank_of(Mat m);

// Basis of {x : m x = 0} with x of length ncols. Each basis vector has a 1
// in its free coordinate (rref convention), giving a canonical basis.
std::vector<Vec> nullspace(const Mat& m, int ncols);

// Solves a x = b. Returns nullopt when the system is inconsistent or the
// solution is not unique.
std::optional<Vec> solve_unique(const Mat& a, const Vec& b);

std::optional<Mat> invert(const Mat& a);

Rat det(Mat a);

}  // namespace lipsel
