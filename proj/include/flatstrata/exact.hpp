#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace flatstrata {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntRow = std::vector<BigInt>;
using RationalRow = std::vector<Rational>;
using RationalMatrix = std::vector<RationalRow>;

// Rank of an integer matrix by fraction-free (Bareiss) elimination.
int exact_rank(std::vector<IntRow> rows);
int exact_rank(const std::vector<std::vector<int>>& rows);

// Reduced row echelon form over Q.
struct Rref {
    RationalMatrix rows;     // nonzero rows only
    std::vector<int> pivots; // pivot column of each row
};
Rref rref(RationalMatrix m);

// Basis of {x : M x = 0}, one column vector per entry.
RationalMatrix nullspace(const RationalMatrix& m, int ncols);

// Inverse of a square rational matrix; throws Error("SingularMatrix").
RationalMatrix inverse(const RationalMatrix& m);

// Incrementally grown row space kept in reduced echelon form; used for
// repeated independence queries against a fixed set of relations.
class EchelonBasis {
public:
    explicit EchelonBasis(int ncols = 0) : ncols_(ncols) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    // Reduce v modulo the current span.
    RationalRow reduce(RationalRow v) const;
    // Adds v if it is independent of the span; returns whether it was.
    bool insert(const RationalRow& v);
    bool contains(const RationalRow& v) const;

private:
    int ncols_;
    RationalMatrix rows_;
    std::vector<int> pivots_;
};

RationalRow to_rational(const std::vector<int>& v);
std::string to_string(const Rational& q);

} // namespace flatstrata
