#include "flagflow/roots.hpp"

#include "flagflow/errors.hpp"
#include "flagflow/orbit_action.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace flagflow {

std::vector<Block> group_blocks(std::span<const double> ascending, double rel_tol) {
    std::vector<Block> blocks;
    if (ascending.empty()) return blocks;
    for (std::size_t k = 1; k < ascending.size(); ++k) {
        if (ascending[k] < ascending[k - 1]) {
            throw PreconditionError("group_blocks: eigenvalues must be ascending");
        }
    }
    const double diameter = ascending.back() - ascending.front();
    const double tol = rel_tol * diameter;

    auto close_block = [&](std::size_t begin, std::size_t end) {
        double sum = 0.0;
        for (std::size_t k = begin; k < end; ++k) sum += ascending[k];
        blocks.push_back(Block{sum / static_cast<double>(end - begin), end - begin, begin});
    };

    std::size_t begin = 0;
    for (std::size_t k = 1; k < ascending.size(); ++k) {
        const double gap = ascending[k] - ascending[k - 1];
        if (gap > tol / 10.0 && gap < tol * 10.0) {
            std::ostringstream os;
            os << "eigenvalue gap " << gap << " between positions " << k - 1 << " and " << k
               << " is within a factor 10 of the grouping tolerance " << tol;
            throw GroupingAmbiguityError(os.str());
        }
        if (gap > tol) {
            close_block(begin, k);
            begin = k;
        }
    }
    close_block(begin, ascending.size());
    return blocks;
}

Eigen::VectorXd expand_blocks(std::span<const Block> blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.multiplicity;
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (const auto& b : blocks) {
        out.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.multiplicity)).setConstant(b.value);
    }
    return out;
}

template <class Scalar>
Mat<Scalar> RootDecomposition<Scalar>::to_frame(const Mat<Scalar>& m) const {
    return frame.frame.adjoint() * m * frame.frame;
}

template <class Scalar>
Mat<Scalar> RootDecomposition<Scalar>::from_frame(const Mat<Scalar>& m) const {
    return frame.frame * m * frame.frame.adjoint();
}

template <class Scalar>
std::size_t RootDecomposition<Scalar>::block_of(std::size_t col) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (col < blocks[b].end()) return b;
    }
    throw PreconditionError("block_of: column index out of range");
}

template <class Scalar>
double RootDecomposition<Scalar>::sector_value(std::size_t row_block, std::size_t col_block) const {
    if (row_block == col_block) return 0.0;
    return blocks.at(row_block).value - blocks.at(col_block).value;
}

template <class Scalar>
RootDecomposition<Scalar> decompose(const OrbitPoint<Scalar>& x) {
    RootDecomposition<Scalar> dec{x.context(), x.frame(), x.blocks(), {}};
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            dec.positive_roots.push_back(PositiveRoot{i, j, dec.blocks[i].value - dec.blocks[j].value});
        }
    }
    std::sort(dec.positive_roots.begin(), dec.positive_roots.end(), [](const PositiveRoot& a, const PositiveRoot& b) {
        return std::tie(a.alpha, a.upper, a.lower) < std::tie(b.alpha, b.upper, b.lower);
    });
    return dec;
}

template <class Scalar>
SplitDimensions split_dimensions(const RootDecomposition<Scalar>& dec) {
    SplitDimensions d;
    for (const auto& r : dec.positive_roots) {
        d.n_plus += dec.blocks[r.upper].multiplicity * dec.blocks[r.lower].multiplicity;
    }
    d.n_minus = d.n_plus;
    for (const auto& b : dec.blocks) d.c += b.multiplicity * b.multiplicity;
    d.c -= 1;  // traceless
    return d;
}

namespace {

auto seg(const Block& b) {
    return std::pair{static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.multiplicity)};
}

template <class Scalar>
auto sector(Mat<Scalar>& m, const Block& rows, const Block& cols) {
    const auto [r0, rn] = seg(rows);
    const auto [c0, cn] = seg(cols);
    return m.block(r0, c0, rn, cn);
}

template <class Scalar>
auto sector(const Mat<Scalar>& m, const Block& rows, const Block& cols) {
    const auto [r0, rn] = seg(rows);
    const auto [c0, cn] = seg(cols);
    return m.block(r0, c0, rn, cn);
}

}  // namespace

template <class Scalar>
Mat<Scalar> block_diagonal_part(const Mat<Scalar>& framed, std::span<const Block> blocks) {
    Mat<Scalar> out = Mat<Scalar>::Zero(framed.rows(), framed.cols());
    for (const auto& b : blocks) sector(out, b, b) = sector(framed, b, b);
    return out;
}

template <class Scalar>
Mat<Scalar> off_block_part(const Mat<Scalar>& framed, std::span<const Block> blocks) {
    Mat<Scalar> out = framed;
    for (const auto& b : blocks) sector(out, b, b).setZero();
    return out;
}

template <class Scalar>
TriangularSplit<Scalar> triangular_split(const AmbientElement<Scalar>& a, const RootDecomposition<Scalar>& dec) {
    require_same_context(a.context(), dec.ctx);
    const Mat<Scalar> framed = dec.to_frame(a.mat());
    const auto n = framed.rows();
    Mat<Scalar> plus = Mat<Scalar>::Zero(n, n);
    Mat<Scalar> minus = Mat<Scalar>::Zero(n, n);
    const Mat<Scalar> zero = block_diagonal_part<Scalar>(framed, dec.blocks);
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
        for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
            if (i > j) sector(plus, dec.blocks[i], dec.blocks[j]) = sector(framed, dec.blocks[i], dec.blocks[j]);
            if (i < j) sector(minus, dec.blocks[i], dec.blocks[j]) = sector(framed, dec.blocks[i], dec.blocks[j]);
        }
    }
    // The root sectors are traceless; c carries the whole trace of a, which is zero.
    Mat<Scalar> zero_back = dec.from_frame(zero);
    zero_back.diagonal().array() -= zero_back.trace() / static_cast<double>(n);
    return TriangularSplit<Scalar>{AmbientElement<Scalar>(dec.ctx, dec.from_frame(minus)),
                                   AmbientElement<Scalar>(dec.ctx, std::move(zero_back)),
                                   AmbientElement<Scalar>(dec.ctx, dec.from_frame(plus))};
}

template <class Scalar>
AmbientElement<Scalar> root_component(const AmbientElement<Scalar>& a, const PositiveRoot& root,
                                      const RootDecomposition<Scalar>& dec) {
    require_same_context(a.context(), dec.ctx);
    const Mat<Scalar> framed = dec.to_frame(a.mat());
    Mat<Scalar> kept = Mat<Scalar>::Zero(framed.rows(), framed.cols());
    const Block& up = dec.blocks.at(root.upper);
    const Block& lo = dec.blocks.at(root.lower);
    sector(kept, up, lo) = sector(framed, up, lo);
    sector(kept, lo, up) = sector(framed, lo, up);
    return AmbientElement<Scalar>(dec.ctx, dec.from_frame(kept));
}

#define FLAGFLOW_INSTANTIATE(S)                                                                            \
    template struct RootDecomposition<S>;                                                                  \
    template RootDecomposition<S> decompose<S>(const OrbitPoint<S>&);                                      \
    template SplitDimensions split_dimensions<S>(const RootDecomposition<S>&);                             \
    template TriangularSplit<S> triangular_split<S>(const AmbientElement<S>&, const RootDecomposition<S>&); \
    template AmbientElement<S> root_component<S>(const AmbientElement<S>&, const PositiveRoot&,           \
                                                 const RootDecomposition<S>&);                             \
    template Mat<S> block_diagonal_part<S>(const Mat<S>&, std::span<const Block>);                         \
    template Mat<S> off_block_part<S>(const Mat<S>&, std::span<const Block>);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
