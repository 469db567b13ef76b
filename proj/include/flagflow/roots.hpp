#pragma once

// Root-space decomposition of g relative to an orbit point x.
//
// In an eigenframe U of x with eigenvalues grouped into ascending blocks, the
// root space for alpha(x) = mu_i - mu_j is the sector of matrices U E U^H with
// E supported on rows of block i and columns of block j. Sectors with
// mu_i > mu_j (block-lower-triangular in the ascending frame) make up n+, the
// block diagonal is c, and the block-upper-triangular part is n-.

#include "flagflow/lie_core.hpp"
#include "flagflow/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flagflow {

template <class Scalar>
class OrbitPoint;

/// A maximal run of (numerically) equal eigenvalues.
struct Block {
    double value = 0.0;
    std::size_t multiplicity = 0;
    std::size_t offset = 0;  ///< first frame column of the block

    std::size_t end() const { return offset + multiplicity; }
};

/// Relative grouping tolerance: eigenvalues closer than this times the
/// spectral diameter are merged into one block.
inline constexpr double kGroupingRelTol = 1e-8;

/// Groups an ascending eigenvalue list into blocks. The block value is the
/// mean of its members. Throws GroupingAmbiguityError when some gap lies
/// within a factor 10 of the tolerance.
std::vector<Block> group_blocks(std::span<const double> ascending, double rel_tol = kGroupingRelTol);

/// Block values repeated by multiplicity.
Eigen::VectorXd expand_blocks(std::span<const Block> blocks);

/// Positive root alpha with alpha(x) = blocks[upper].value - blocks[lower].value > 0.
struct PositiveRoot {
    std::size_t upper = 0;
    std::size_t lower = 0;
    double alpha = 0.0;
};

template <class Scalar>
struct RootDecomposition {
    AlgebraContext<Scalar> ctx;
    SpectralFrame<Scalar> frame;
    std::vector<Block> blocks;
    std::vector<PositiveRoot> positive_roots;  ///< sorted by alpha, then (upper, lower)

    /// U^H m U
    Mat<Scalar> to_frame(const Mat<Scalar>& m) const;
    /// U m U^H
    Mat<Scalar> from_frame(const Mat<Scalar>& m) const;

    /// Index of the block owning frame column `col`.
    std::size_t block_of(std::size_t col) const;

    /// Values alpha(x) of every (row block, column block) sector, i.e.
    /// value_row - value_col; zero on the diagonal blocks.
    double sector_value(std::size_t row_block, std::size_t col_block) const;
};

struct SplitDimensions {
    std::size_t n_plus = 0;
    std::size_t c = 0;
    std::size_t n_minus = 0;

    std::size_t total() const { return n_plus + c + n_minus; }
};

template <class Scalar>
RootDecomposition<Scalar> decompose(const OrbitPoint<Scalar>& x);

/// Dimensions over the scalar field of n+, c (traceless) and n-.
template <class Scalar>
SplitDimensions split_dimensions(const RootDecomposition<Scalar>& dec);

template <class Scalar>
struct TriangularSplit {
    AmbientElement<Scalar> minus;
    AmbientElement<Scalar> zero;
    AmbientElement<Scalar> plus;
};

/// Unique decomposition a = a_minus + a_zero + a_plus with a_plus in n+, a_zero in c, a_minus in n-.
template <class Scalar>
TriangularSplit<Scalar> triangular_split(const AmbientElement<Scalar>& a, const RootDecomposition<Scalar>& dec);

/// Keeps both sectors (upper, lower) and (lower, upper) of `a`, zeroing the rest.
/// For a in p (or k) this is the component in (g_alpha + g_-alpha) cap p (or k).
template <class Scalar>
AmbientElement<Scalar> root_component(const AmbientElement<Scalar>& a, const PositiveRoot& root,
                                      const RootDecomposition<Scalar>& dec);

/// Frame-space mask helpers: keep only the block diagonal / only the off-block sectors.
template <class Scalar>
Mat<Scalar> block_diagonal_part(const Mat<Scalar>& framed, std::span<const Block> blocks);

template <class Scalar>
Mat<Scalar> off_block_part(const Mat<Scalar>& framed, std::span<const Block> blocks);

}  // namespace flagflow
