#include "flatstrata/exact.hpp"

#include <utility>

#include "flatstrata/errors.hpp"

namespace flatstrata {

int exact_rank(std::vector<IntRow> a)
{
    const int n = static_cast<int>(a.size());
    if (n == 0)
        return 0;
    const int m = static_cast<int>(a[0].size());
    BigInt prev = 1;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = r;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            continue;
        std::swap(a[p], a[r]);
        for (int i = r + 1; i < n; ++i) {
            for (int j = c + 1; j < m; ++j)
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

int exact_rank(const std::vector<std::vector<int>>& rows)
{
    std::vector<IntRow> a;
    a.reserve(rows.size());
    for (const auto& row : rows)
        a.emplace_back(row.begin(), row.end());
    return exact_rank(std::move(a));
}

Rref rref(RationalMatrix a)
{
    Rref out;
    const int n = static_cast<int>(a.size());
    if (n == 0)
        return out;
    const int m = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = r;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (int j = c; j < m; ++j)
            a[r][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            Rational f = a[i][c];
            for (int j = c; j < m; ++j)
                a[i][j] -= f * a[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    out.rows = std::move(a);
    return out;
}

RationalMatrix nullspace(const RationalMatrix& m, int ncols)
{
    Rref e = rref(m);
    std::vector<int> is_pivot(ncols, -1);
    for (size_t i = 0; i < e.pivots.size(); ++i)
        is_pivot[e.pivots[i]] = static_cast<int>(i);
    RationalMatrix basis;
    for (int f = 0; f < ncols; ++f) {
        if (is_pivot[f] >= 0)
            continue;
        RationalRow x(ncols, Rational(0));
        x[f] = 1;
        for (size_t i = 0; i < e.pivots.size(); ++i)
            x[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(x));
    }
    return basis;
}

RationalMatrix inverse(const RationalMatrix& m)
{
    const int n = static_cast<int>(m.size());
    RationalMatrix a(n, RationalRow(2 * n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    Rref e = rref(std::move(a));
    if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1)
        fail("SingularMatrix", "matrix is not invertible");
    RationalMatrix inv(n, RationalRow(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv[i][j] = e.rows[i][n + j];
    return inv;
}

RationalRow EchelonBasis::reduce(RationalRow v) const
{
    for (size_t i = 0; i < rows_.size(); ++i) {
        const Rational& f = v[pivots_[i]];
        if (f == 0)
            continue;
        Rational g = f;
        for (int j = 0; j < ncols_; ++j)
            v[j] -= g * rows_[i][j];
    }
    return v;
}

bool EchelonBasis::insert(const RationalRow& v)
{
    RationalRow r = reduce(v);
    int p = -1;
    for (int j = 0; j < ncols_; ++j)
        if (r[j] != 0) {
            p = j;
            break;
        }
    if (p < 0)
        return false;
    Rational inv = 1 / r[p];
    for (int j = p; j < ncols_; ++j)
        r[j] *= inv;
    // keep the basis fully reduced so that reduce() is a single pass
    for (size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][p] == 0)
            continue;
        Rational f = rows_[i][p];
        for (int j = p; j < ncols_; ++j)
            rows_[i][j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
}

bool EchelonBasis::contains(const RationalRow& v) const
{
    RationalRow r = reduce(v);
    for (const auto& x : r)
        if (x != 0)
            return false;
    return true;
}

RationalRow to_rational(const std::vector<int>& v)
{
    return RationalRow(v.begin(), v.end());
}

std::string to_string(const Rational& q)
{
    return q.str();
}

} // namespace flatstrata
