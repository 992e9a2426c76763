#include "obstruct/exactla.hpp"

#include <algorithm>

namespace obstruct {

namespace {

SparseRow normalise(PrimeField const& f, SparseRow row) {
    std::sort(row.begin(), row.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
    SparseRow out;
    out.reserve(row.size());
    for (auto const& [c, v] : row) {
        if (!out.empty() && out.back().first == c)
            out.back().second = f.add(out.back().second, v);
        else
            out.emplace_back(c, v);
    }
    std::erase_if(out, [&](auto const& e) { return f.is_zero(e.second); });
    return out;
}

// row - factor * other, both sorted
SparseRow axpy(PrimeField const& f, SparseRow const& row, PrimeField::Elem factor, SparseRow const& other) {
    SparseRow out;
    out.reserve(row.size() + other.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < other.size()) {
        if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
            out.push_back(row[i++]);
        } else if (i == row.size() || other[j].first < row[i].first) {
            out.emplace_back(other[j].first, f.neg(f.mul(factor, other[j].second)));
            ++j;
        } else {
            auto v = f.sub(row[i].second, f.mul(factor, other[j].second));
            if (!f.is_zero(v))
                out.emplace_back(row[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

void SparseSystem::add_equation(SparseRow row, PrimeField::Elem rhs) {
    ++rows_added_;
    if (pivot_of_col_.size() != cols_)
        pivot_of_col_.assign(cols_, -1);
    row = normalise(field_, std::move(row));
    for (auto const& [c, v] : row)
        if (c >= cols_)
            throw InvalidInput("SparseSystem: column index out of range");
    while (!row.empty()) {
        auto lead = row.front().first;
        auto p = pivot_of_col_[lead];
        if (p < 0)
            break;
        auto factor = row.front().second;
        auto const& piv = pivots_[static_cast<std::size_t>(p)];
        row = axpy(field_, row, factor, piv.row);
        rhs = field_.sub(rhs, field_.mul(factor, piv.rhs));
    }
    if (row.empty()) {
        if (!field_.is_zero(rhs))
            consistent_ = false;
        return;
    }
    auto inv = field_.inv(row.front().second);
    for (auto& e : row)
        e.second = field_.mul(e.second, inv);
    rhs = field_.mul(rhs, inv);
    pivot_of_col_[row.front().first] = static_cast<std::ptrdiff_t>(pivots_.size());
    pivots_.push_back({std::move(row), rhs});
}

SparseSystem::Result SparseSystem::solve() const {
    Result res;
    res.rows = rows_added_;
    res.cols = cols_;
    res.rank = pivots_.size();
    res.consistent = consistent_;
    if (!consistent_)
        return res;
    res.solution.assign(cols_, 0);
    std::vector<std::size_t> order(pivots_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return pivots_[a].row.front().first > pivots_[b].row.front().first; });
    for (auto idx : order) {
        auto const& piv = pivots_[idx];
        auto value = piv.rhs;
        for (std::size_t k = 1; k < piv.row.size(); ++k) {
            auto const& [c, a] = piv.row[k];
            value = field_.sub(value, field_.mul(a, res.solution[c]));
        }
        res.solution[piv.row.front().first] = value;
    }
    return res;
}

} // namespace obstruct
