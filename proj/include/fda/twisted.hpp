#ifndef FDA_TWISTED_HPP
#define FDA_TWISTED_HPP

#include "fda/qring.hpp"

#include <map>
#include <vector>

namespace fda {

/// Element of the twisted group algebra Q_W: a finite map from Weyl
/// elements to Q-coefficients in delta-coordinates. Absent keys are zero.
struct QWElem {
    std::map<WIdx, QElem> c;

    bool is_zero() const { return c.empty(); }
};

enum class Family { Y, X };

/// Base-change data between the delta-basis and the Y- (or X-) word basis:
/// A expands word elements in deltas over Q, B is the triangular inverse
/// with entries certified in S. Indexed by the ambient enumeration; rows
/// restricted by the Bruhat order.
struct BaseChange {
    Family family = Family::Y;
    /// a[z][y]: coefficient of delta_y in Y_z (zero QElem when absent/zero).
    std::vector<std::vector<QElem>> a;
    /// b[z][y]: coefficient of Y_y in delta_z, certified in S.
    std::vector<std::vector<SElem>> b;
};

/// Operations in Q_W over a fixed Algebra. Word products are cached by
/// prefix so repeated expansions across parabolics stay cheap.
class TwistedAlgebra {
public:
    explicit TwistedAlgebra(const Algebra& alg);

    const Algebra& algebra() const { return a_; }
    const QOps& q() const { return q_; }

    QWElem zero() const { return {}; }
    QWElem delta(WIdx z) const;
    QWElem from_q(QElem qe) const; // q * delta_e
    QWElem x_of(int simple) const; // Demazure element X_s
    QWElem y_of(int simple) const; // push-pull element Y_s
    /// Y_P = sum_{v in W_L} delta_v x_L^{-1}, coefficients pre-twisted.
    QWElem y_parab() const;
    /// Y_{G,L} = sum_{w in W^L} delta_w x_G^{-1} x_L.
    QWElem y_gl() const;
    QWElem y_full() const; // Y_G

    QWElem add(const QWElem& h, const QWElem& k) const;
    QWElem sub(const QWElem& h, const QWElem& k) const;
    QWElem neg(QWElem h) const;
    QWElem mul(const QWElem& h, const QWElem& k) const;
    QWElem scale_q(const QWElem& h, const QElem& q) const;  // left multiply by q
    QWElem mul_delta_left(WIdx z, const QWElem& h) const;   // delta_z * h

    /// Word products Y_{s_1}...Y_{s_p} (or X_...), cached on prefixes.
    QWElem word_product(const std::vector<int>& word, Family fam) const;
    QWElem y_seq(const std::vector<int>& word) const { return word_product(word, Family::Y); }
    QWElem x_seq(const std::vector<int>& word) const { return word_product(word, Family::X); }

    /// h acting on q in Q: sum_y q_y y(q).
    QElem act_on_S(const QWElem& h, const QElem& qe) const;
    QElem act_on_one(const QWElem& h) const;

    bool equal(const QWElem& h, const QWElem& k) const;

    /// Base change for the parabolic word table of the bound root system;
    /// built once per (table, family) and shared.
    const BaseChange& base_change(Family fam) const;

    /// Coefficient vector of Y_z (over z in W) in the expansion of the word
    /// product Y_I; entries certified in S. The reference stays valid for
    /// the lifetime of this object.
    const std::vector<SElem>& b_of_sequence(const std::vector<int>& word, Family fam) const;

private:
    const Algebra& a_;
    QOps q_;
    mutable std::mutex mx_;
    mutable std::map<std::pair<std::vector<int>, Family>, QWElem> words_;
    mutable std::map<std::pair<std::uint64_t, Family>, std::shared_ptr<const BaseChange>> bc_;
    mutable std::map<std::pair<std::vector<int>, Family>, std::vector<SElem>> bseq_;

    QWElem simple_gen(int simple, Family fam) const;
    std::shared_ptr<const BaseChange> build_base_change(Family fam) const;
};

} // namespace fda

#endif
