#ifndef FDA_DUAL_HPP
#define FDA_DUAL_HPP

#include "fda/twisted.hpp"

namespace fda {

/// Element of Q_W^* in the fixed-point function model: the value at z is
/// the coefficient of f_z. Elements of D^* are exactly those whose
/// expansion coefficients against the Y- (or X-) word basis land in S;
/// that membership is certified on demand by expand_in.
struct DualElem {
    std::vector<QElem> v; // indexed by ambient WIdx
};

/// Same model for the Levi system: values indexed by position in W_L's
/// listing.
struct DualLElem {
    std::vector<QElem> v;
};

/// Report of the degreewise Borel-map surjectivity check.
struct RhoReport {
    struct Row {
        int degree = 0;
        int target_dim = 0;
        int image_dim = 0;
    };
    std::vector<Row> rows;
    int first_failing_degree = -1; // -1 when fully surjective through max degree
    bool ok() const { return first_failing_degree < 0; }
};

/// The dual D^* of the formal affine Demazure algebra in the fixed-point
/// model, for a fixed root system with parabolic, together with the Levi
/// counterpart D_L^*. Pure const operations over shared caches.
class DualModule {
public:
    explicit DualModule(const TwistedAlgebra& tw);

    const TwistedAlgebra& twisted() const { return tw_; }
    const Algebra& algebra() const { return a_; }
    const RootSystem& rs() const { return a_.rs(); }

    // --- construction and ring structure (pointwise) ---
    DualElem zero_elem() const;
    DualElem one() const; // constant function 1, the multiplicative identity
    DualElem f_point(WIdx z) const;
    DualElem from_values(std::vector<QElem> vals) const;
    DualElem add(const DualElem& f, const DualElem& g) const;
    DualElem sub(const DualElem& f, const DualElem& g) const;
    DualElem neg(DualElem f) const;
    DualElem mul(const DualElem& f, const DualElem& g) const;
    DualElem scale_q(const DualElem& f, const QElem& q) const;
    DualElem scale_s(const DualElem& f, const SElem& s) const;
    bool equal(const DualElem& f, const DualElem& g) const;

    // --- the bullet action ---
    /// (h bullet f)(z) = sum_y z(q_y) f(zy) for h = sum q_y delta_y.
    DualElem bullet(const QWElem& h, const DualElem& f) const;
    /// delta_y bullet f, a value permutation.
    DualElem bullet_delta(WIdx y, const DualElem& f) const;
    /// T_{s_1}...T_{s_p} bullet f, applied efficiently generator by
    /// generator (rightmost factor acts first).
    DualElem bullet_word(const std::vector<int>& word, Family fam, DualElem f) const;

    // --- distinguished classes and bases ---
    /// Y_z^x = Y_{I_z rev} bullet x_G f_e, cross-checked against the closed
    /// form sum_{y<=z} a_{z,y} y(x_G) f_y. Likewise for the X family.
    const DualElem& times_class(Family fam, WIdx z) const;
    /// Y_x^* (values b_{z,x}) or X_x^*.
    const DualElem& dual_basis(Family fam, WIdx x) const;
    /// Coefficients of f in the Y^*/X^* basis, certified in S.
    std::vector<SElem> expand_in(const DualElem& f, Family fam) const;
    DualElem rebuild(const std::vector<SElem>& coeffs, Family fam) const;

    // --- pairings and the parabolic projection ---
    SElem pairing(const DualElem& f, const DualElem& g) const;
    SElem pairing_parab(const DualElem& f, const DualElem& g) const;
    DualElem project_parab(const DualElem& f) const; // Y_P bullet f
    bool is_WL_invariant(const DualElem& f) const;
    /// Y_P bullet times_class(Y, w) for w in W^L (by position), cached.
    const DualElem& projected_times(int wpos) const;

    /// Z_w^* for w = WupperL()[wpos]: the unique S-combination of
    /// {X_{w'}^*} with pairing_parab(Z_w^*, projected_times(w')) = delta.
    const DualElem& z_star(int wpos) const;
    const std::vector<SElem>& z_star_xstar_coeffs(int wpos) const;

    // --- the Levi system D_L^* ---
    int levi_size() const { return int(rs().WL().size()); }
    DualLElem levi_zero() const;
    const DualLElem& levi_dual_basis(Family fam, int vpos) const;
    const DualLElem& levi_times_class(Family fam, int vpos) const;
    std::vector<SElem> levi_expand(const DualLElem& g, Family fam) const;
    SElem levi_pairing(const DualLElem& f, const DualLElem& g) const;
    /// i_a^*: restriction of values to W_L.
    DualLElem restrict_L(const DualElem& f) const;
    /// j_a: basis-to-basis section (Y_{v,L}^* -> Y_v^*, X likewise).
    DualElem section_j_a(const DualLElem& g, Family fam) const;
    bool levi_equal(const DualLElem& f, const DualLElem& g) const;

    // --- characteristic and Borel maps, characters ---
    DualElem char_map(const SElem& p) const;   // values w(p)
    DualLElem char_map_L(const SElem& p) const;
    DualElem borel_rho(const SElem& p, const SElem& q) const;
    RhoReport rho_surjectivity_check(int max_degree) const;
    /// (chi_L(v), chi(v)): traces of delta_v bullet on D^* and D_L^*.
    std::pair<SElem, SElem> character_trace(WIdx v) const;

private:
    const TwistedAlgebra& tw_;
    const Algebra& a_;
    const QOps& q_;

    // per-y images of the structured coefficients
    std::vector<QElem> gG_;   // y(x_G)^{-1}
    std::vector<QElem> gP_;   // y(x_L^{-1})
    std::vector<QElem> gGL_;  // y(x_G^{-1} x_L)
    std::vector<SElem> wxG_;  // y(x_G)
    std::vector<SElem> wxL_;  // y(x_L) for y in W_L (by position)
    std::vector<QElem> gL_;   // y(x_L)^{-1} for y in W_L (by position)

    mutable std::mutex mx_;
    mutable std::map<std::pair<Family, WIdx>, DualElem> times_;
    mutable std::map<std::pair<Family, WIdx>, DualElem> star_;
    mutable std::map<int, DualElem> ptimes_;
    mutable std::map<int, DualElem> zstar_;
    mutable std::map<int, std::vector<SElem>> zstar_coeffs_;
    mutable std::map<std::pair<Family, int>, DualLElem> levi_star_;
    mutable std::map<std::pair<Family, int>, DualLElem> levi_times_;

    int wl_pos(WIdx v) const; // position of v in WL(), -1 otherwise
    std::vector<int> wlpos_;  // ambient WIdx -> WL position or -1
};

} // namespace fda

#endif
