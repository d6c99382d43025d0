#ifndef FDA_LH_HPP
#define FDA_LH_HPP

#include "fda/dual.hpp"

#include <string>

namespace fda {

/// The square matrix of the Leray-Hirsch expansion, indexed by the linear
/// order on W. Row (w,v) holds the expansion of Z_w^* Y_v^* in the Y^*
/// basis (geometric tag) or of X_w^* X_v^* in the X^* basis (algebraic
/// tag). Blocks are |W_L|-square along the W^L x W^L grid.
struct CMatrix {
    bool geometric = true;
    std::vector<std::vector<SElem>> entries; // entries[row][col], order positions
    int block = 1;                           // |W_L|
};

/// Certification record for one assembled matrix.
struct LHReport {
    bool block_upper_triangular = false;
    bool diag_blocks_upper_mod_splus = false;
    bool diag_residues_match = false; // diagonal = (-1)^{l(wv)} prod u_gamma mod S_+
    bool diag_in_one_plus_splus = false;
    bool det_augmentation_is_one = false;
    Coeff det_augmentation;
    std::vector<std::string> failures;

    bool verdict() const {
        return block_upper_triangular && diag_blocks_upper_mod_splus &&
               diag_residues_match && diag_in_one_plus_splus && det_augmentation_is_one;
    }
};

/// The main-theorem pipeline over a fixed DualModule.
class LerayHirsch {
public:
    explicit LerayHirsch(const DualModule& dual);

    const DualModule& dual() const { return d_; }
    const Algebra& algebra() const { return a_; }

    /// e_{z,w'} with Y_P bullet Y_z^x = sum e_{z,w'} (Y_P bullet Y_{w'}^x),
    /// extracted by pairing against the Z-duals. Indexed [z][w'pos].
    const std::vector<std::vector<SElem>>& e_coeffs() const;

    /// Coefficients of q Y_{I_z rev} bullet x_G f_e in the times-class
    /// basis: the closed double-sum formula, and the direct route.
    std::vector<SElem> multqs_formula(const QElem& q, WIdx z) const;
    std::vector<SElem> multqs_direct(const QElem& q, WIdx z) const;

    /// expand_in(z_star(w), Y) with the leading-block and vanishing
    /// assertions; throws internal_check_failed when they fail.
    std::vector<SElem> z_star_expansion(int wpos) const;

    /// w(Y_v . 1) for w in W^L, v in W_L.
    SElem w_of_yv1(WIdx w, WIdx v) const;

    /// One factor of the structure-constant product (three cases).
    QWElem gz_B_factor(int pos, const PositionedSubseq& E, const PositionedSubseq& F,
                       const std::vector<int>& word, Family fam) const;

    /// Structure constant p_{u,v}^w by the published double sum over pairs
    /// of positioned subsequences of I_w.
    SElem gz_structure_const(WIdx u, WIdx v, WIdx w, Family fam) const;

    /// Oracle: coefficients of T_u^* T_v^* in the T^* basis (pointwise
    /// product + expansion), memoized. Indexed by ambient WIdx.
    const std::vector<SElem>& structure_row(WIdx u, WIdx v, Family fam) const;

    /// Assemble the matrix; for the geometric tag with compare_routes the
    /// e.p double-sum route is checked against the direct expansion.
    CMatrix assemble(bool geometric, bool compare_routes) const;

    LHReport verify(const CMatrix& c) const;

    /// Entrywise augmentation (the non-equivariant specialization).
    std::vector<std::vector<Coeff>> specialize(const CMatrix& c) const;
    bool specialized_unitriangular(const std::vector<std::vector<Coeff>>& m) const;
    Coeff specialized_det(const std::vector<std::vector<Coeff>>& m) const;

    /// Solve for the coefficients of f against the row classes of a
    /// certified matrix: f = sum c_{w,v} Z_w^* Y_v^* (or X_w^* X_v^*).
    std::vector<SElem> lh_expand(const DualElem& f, const CMatrix& c) const;
    /// Rebuild sum c_{w,v} (row class) for round-trip checks.
    DualElem lh_rebuild(const std::vector<SElem>& coeffs, const CMatrix& c) const;

    /// Row class of a matrix row: Z_w^* Y_v^* or X_w^* X_v^*.
    DualElem row_class(const CMatrix& c, int row) const;

private:
    const DualModule& d_;
    const TwistedAlgebra& tw_;
    const Algebra& a_;
    const QOps& q_;

    mutable std::mutex mx_;
    mutable std::map<std::tuple<WIdx, WIdx, Family>, std::vector<SElem>> srow_;
    mutable std::unique_ptr<std::vector<std::vector<SElem>>> ecoeffs_;

    std::vector<SElem> expand_in_times(const DualElem& f) const;
};

} // namespace fda

#endif
