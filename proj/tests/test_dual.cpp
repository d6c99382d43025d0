#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fda/dual.hpp"
#include "fda/errors.hpp"

#include <random>

using namespace fda;

namespace {

struct Setup {
    std::shared_ptr<const RootSystem> rs;
    std::shared_ptr<const Fgl> fgl;
    std::unique_ptr<Algebra> alg;
    std::unique_ptr<TwistedAlgebra> tw;
    std::unique_ptr<DualModule> dual;

    Setup(char fam, int rank, std::vector<int> par, const char* law = "mult1") {
        rs = RootSystem::build(fam, rank, par);
        auto prec = PrecisionPolicy::for_rank(rank, rs->npos());
        if (std::string(law) == "mult1")
            fgl = Fgl::multiplicative(CoeffRing::rationals(), Coeff(1), prec.workdeg);
        else if (std::string(law) == "add")
            fgl = Fgl::additive(CoeffRing::rationals(), prec.workdeg);
        else
            fgl = Fgl::generic(2, prec.workdeg);
        alg = std::make_unique<Algebra>(rs, fgl, prec);
        tw = std::make_unique<TwistedAlgebra>(*alg);
        dual = std::make_unique<DualModule>(*tw);
    }
    const QOps& q() const { return tw->q(); }
};

SElem rand_selem(const Setup& S, std::mt19937_64& rng, int nterms = 5) {
    SElem s = S.alg->zero();
    for (int t = 0; t < nterms; ++t) {
        int v[4] = {};
        for (int i = 0; i < S.rs->rank(); ++i) v[size_t(i)] = int(rng() % 3);
        s.s.add_term(exp_make(v, S.rs->rank()), Coeff((long long)(rng() % 9) - 4));
    }
    return s;
}

DualElem rand_dstar(const Setup& S, std::mt19937_64& rng) {
    // random S-combination of the Y^* basis, hence an element of D^*
    DualElem f = S.dual->zero_elem();
    for (WIdx x = 0; x < S.rs->order(); ++x) {
        if (rng() % 2) continue;
        f = S.dual->add(f, S.dual->scale_s(S.dual->dual_basis(Family::Y, x),
                                           rand_selem(S, rng, 3)));
    }
    return f;
}

} // namespace

TEST_CASE("pointwise ring: indicators and the unit") {
    Setup S('A', 2, {0});
    DualModule& D = *S.dual;
    WIdx e = S.rs->identity(), s = S.rs->simple(0);
    CHECK(D.equal(D.mul(D.f_point(e), D.f_point(e)), D.f_point(e)));
    DualElem zero = D.mul(D.f_point(e), D.f_point(s));
    for (auto& qv : zero.v) CHECK(qv.is_zero());
    DualElem sum = D.zero_elem();
    for (WIdx z = 0; z < S.rs->order(); ++z) sum = D.add(sum, D.f_point(z));
    CHECK(D.equal(sum, D.one()));
}

TEST_CASE("bullet: identity, point permutation, and the A1 push-pull value") {
    Setup S('A', 1, {0});
    DualModule& D = *S.dual;
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    WIdx e = rs.identity(), s = rs.simple(0);
    RootIdx a = rs.simple_root(0);

    std::mt19937_64 rng(3);
    DualElem f = rand_dstar(S, rng);
    CHECK(D.equal(D.bullet(S.tw->delta(e), f), f));

    // delta_y bullet f_z = f_{z y^{-1}}
    for (WIdx y = 0; y < rs.order(); ++y)
        for (WIdx z = 0; z < rs.order(); ++z)
            CHECK(D.equal(D.bullet(S.tw->delta(y), D.f_point(z)),
                          D.f_point(rs.mul(z, rs.inv(y)))));

    // Y_s bullet f_e = x_{-alpha}^{-1} (f_e + f_s)
    DualElem got = D.bullet(S.tw->y_of(0), D.f_point(e));
    QElem coeff = q.inv_root_monomial({{rs.neg(a), 1}});
    DualElem expect = D.scale_q(D.add(D.f_point(e), D.f_point(s)), coeff);
    // both values carry x_{-alpha}^{-1}: at z = s the coefficient is
    // s(x_alpha^{-1}) = x_{-alpha}^{-1} again
    CHECK(D.equal(got, expect));
    CHECK(q.equal(got.v[size_t(e)], coeff));
    CHECK(q.equal(got.v[size_t(s)], coeff));
}

TEST_CASE("times classes: empty word, A1 closed values, Bruhat support") {
    Setup S('A', 1, {0});
    DualModule& D = *S.dual;
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    WIdx e = rs.identity(), s = rs.simple(0);
    RootIdx a = rs.simple_root(0);

    // Y_e^x = x_G f_e
    const DualElem& ye = D.times_class(Family::Y, e);
    CHECK(S.alg->equal(q.to_S(ye.v[size_t(e)]), S.alg->x_of_root(rs.neg(a))));
    CHECK(ye.v[size_t(s)].is_zero());

    // A1: Y_s^x = f_e + f_s = 1
    const DualElem& ys = D.times_class(Family::Y, s);
    CHECK(D.equal(ys, D.one()));

    // support in {y <= z} for a rank-2 system
    Setup S2('B', 2, {1});
    for (WIdx z = 0; z < S2.rs->order(); ++z) {
        const DualElem& f = S2.dual->times_class(Family::Y, z);
        for (WIdx y = 0; y < S2.rs->order(); ++y)
            if (!f.v[size_t(y)].is_zero()) CHECK(S2.rs->bruhat_leq(y, z));
    }
}

TEST_CASE("dual bases: A1 closed forms and the constant X_e^*") {
    Setup S('A', 1, {0});
    DualModule& D = *S.dual;
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    WIdx e = rs.identity(), s = rs.simple(0);
    RootIdx a = rs.simple_root(0);

    const DualElem& ystar_s = D.dual_basis(Family::Y, s);
    CHECK(ystar_s.v[size_t(e)].is_zero());
    CHECK(S.alg->equal(q.to_S(ystar_s.v[size_t(s)]), S.alg->x_of_root(a)));

    for (auto setup : {std::pair<char, int>{'A', 2}, {'B', 2}}) {
        Setup S2(setup.first, setup.second, {0});
        const DualElem& xe = S2.dual->dual_basis(Family::X, S2.rs->identity());
        CHECK(S2.dual->equal(xe, S2.dual->one()));
    }
}

TEST_CASE("scalar pairing: duality of times-classes and dual bases") {
    for (auto setup : {std::pair<char, int>{'A', 1}, {'A', 2}}) {
        Setup S(setup.first, setup.second, {0});
        DualModule& D = *S.dual;
        const RootSystem& rs = *S.rs;
        for (auto fam : {Family::Y, Family::X}) {
            for (WIdx z = 0; z < rs.order(); ++z)
                for (WIdx zp = 0; zp < rs.order(); ++zp) {
                    SElem p = D.pairing(D.times_class(fam, z), D.dual_basis(fam, zp));
                    if (z == zp)
                        CHECK(S.alg->equal(p, S.alg->one()));
                    else
                        CHECK(p.is_zero());
                }
        }
    }
}

TEST_CASE("pairing: A1 worked value and bilinearity") {
    Setup S('A', 1, {0});
    DualModule& D = *S.dual;
    const RootSystem& rs = *S.rs;
    SElem p = D.pairing(D.times_class(Family::Y, rs.identity()),
                        D.dual_basis(Family::Y, rs.identity()));
    CHECK(S.alg->equal(p, S.alg->one()));

    std::mt19937_64 rng(11);
    DualElem f = rand_dstar(S, rng), g = rand_dstar(S, rng), h = rand_dstar(S, rng);
    SElem lhs = D.pairing(D.add(f, g), h);
    SElem rhs = S.alg->add(D.pairing(f, h), D.pairing(g, h));
    CHECK(S.alg->equal(lhs, rhs));
    SElem c = rand_selem(S, rng, 2);
    CHECK(S.alg->equal(D.pairing(D.scale_s(f, c), h), S.alg->mul(c, D.pairing(f, h))));
}

TEST_CASE("expand_in: unit vectors, Y_x . 1 coefficients, and round trips") {
    Setup S('A', 2, {0});
    DualModule& D = *S.dual;
    const RootSystem& rs = *S.rs;

    auto unit = D.expand_in(D.dual_basis(Family::Y, rs.simple(0)), Family::Y);
    for (WIdx x = 0; x < rs.order(); ++x) {
        if (x == rs.simple(0))
            CHECK(S.alg->equal(unit[size_t(x)], S.alg->one()));
        else
            CHECK(unit[size_t(x)].is_zero());
    }

    // expand(1, Y): coefficient at x equals Y_x . 1
    auto ones = D.expand_in(D.one(), Family::Y);
    for (WIdx x = 0; x < rs.order(); ++x) {
        QElem yx1 = S.tw->act_on_one(S.tw->y_seq(rs.word_of(x)));
        CHECK(S.alg->equal(ones[size_t(x)], S.q().to_S(yx1)));
    }

    std::mt19937_64 rng(19);
    for (int iter = 0; iter < 3; ++iter) {
        DualElem f = rand_dstar(S, rng);
        auto coeffs = D.expand_in(f, Family::Y);
        CHECK(D.equal(D.rebuild(coeffs, Family::Y), f));
    }
    // and for the X family
    for (int iter = 0; iter < 2; ++iter) {
        DualElem f = rand_dstar(S, rng);
        auto coeffs = D.expand_in(f, Family::X);
        CHECK(D.equal(D.rebuild(coeffs, Family::X), f));
    }
}

TEST_CASE("parabolic projection and the parabolic pairing") {
    // P = B: projection is the identity, parabolic pairing equals pairing
    {
        Setup S('A', 2, {});
        DualModule& D = *S.dual;
        std::mt19937_64 rng(7);
        DualElem f = rand_dstar(S, rng), g = rand_dstar(S, rng);
        CHECK(D.equal(D.project_parab(f), f));
        CHECK(S.alg->equal(D.pairing_parab(f, g), D.pairing(f, g)));
    }
    // P = G in A1: Y_G bullet Y_e^x = 1
    {
        Setup S('A', 1, {0});
        DualModule& D = *S.dual;
        DualElem p = D.project_parab(D.times_class(Family::Y, S.rs->identity()));
        CHECK(D.equal(p, D.one()));
    }
    // projections land in invariants; adjointness and self-adjointness
    {
        Setup S('B', 2, {0});
        DualModule& D = *S.dual;
        std::mt19937_64 rng(23);
        for (int iter = 0; iter < 3; ++iter) {
            DualElem f = rand_dstar(S, rng);
            DualElem pf = D.project_parab(f);
            CHECK(D.is_WL_invariant(pf));
            DualElem ft = D.project_parab(rand_dstar(S, rng)); // invariant
            CHECK(S.alg->equal(D.pairing(ft, f), D.pairing_parab(ft, pf)));
            DualElem g = rand_dstar(S, rng);
            CHECK(S.alg->equal(D.pairing(D.project_parab(f), g),
                               D.pairing(f, D.project_parab(g))));
        }
    }
}

TEST_CASE("Z duals: degenerate parabolics and the A2 kappa coefficient") {
    // P = B: Z_w^* = Y_w^*
    {
        Setup S('A', 2, {});
        DualModule& D = *S.dual;
        const auto& reps = S.rs->WupperL();
        for (size_t i = 0; i < reps.size(); ++i)
            CHECK(D.equal(D.z_star(int(i)), D.dual_basis(Family::Y, reps[i])));
    }
    // P = G: Z_e^* = 1
    {
        Setup S('A', 2, {0, 1});
        DualModule& D = *S.dual;
        CHECK(D.equal(D.z_star(0), D.one()));
    }
    // A2, P_s: coefficient of Y_{ts}^* in Z_t^* equals kappa_{alpha+beta};
    // leading coefficient at Y_{t}^* is 1
    {
        Setup S('A', 2, {0});
        DualModule& D = *S.dual;
        const RootSystem& rs = *S.rs;
        WIdx t = rs.simple(1), ts = rs.mul(rs.simple(1), rs.simple(0));
        int tpos = -1;
        const auto& reps = rs.WupperL();
        for (size_t i = 0; i < reps.size(); ++i)
            if (reps[i] == t) tpos = int(i);
        REQUIRE(tpos >= 0);
        auto coeffs = D.expand_in(D.z_star(tpos), Family::Y);
        Weight ab{};
        for (int i = 0; i < 2; ++i)
            ab[size_t(i)] = rs.root(rs.simple_root(0))[size_t(i)] +
                            rs.root(rs.simple_root(1))[size_t(i)];
        RootIdx apb = rs.root_index(ab);
        CHECK(S.alg->equal(coeffs[size_t(ts)], S.alg->kappa(apb)));
        CHECK(S.alg->equal(coeffs[size_t(t)], S.alg->one()));
    }
    // Z-duality against the projected times classes (B2, both parabolics)
    for (auto par : {std::vector<int>{0}, std::vector<int>{1}}) {
        Setup S('B', 2, par);
        DualModule& D = *S.dual;
        const int k = int(S.rs->WupperL().size());
        for (int w = 0; w < k; ++w)
            for (int wp = 0; wp < k; ++wp) {
                SElem p = D.pairing_parab(D.z_star(w), D.projected_times(wp));
                if (w == wp)
                    CHECK(S.alg->equal(p, S.alg->one()));
                else
                    CHECK(p.is_zero());
            }
    }
}

TEST_CASE("Levi duals, restriction, and the section") {
    Setup S('A', 2, {0});
    DualModule& D = *S.dual;
    const RootSystem& rs = *S.rs;
    WIdx s = rs.simple(0), t = rs.simple(1);

    // i_a^*(Y_z^*) = Y_{z,L}^* for z in W_L, 0 otherwise
    for (WIdx z = 0; z < rs.order(); ++z) {
        DualLElem r = D.restrict_L(D.dual_basis(Family::Y, z));
        if (rs.in_WL(z)) {
            int vpos = -1;
            const auto& wl = rs.WL();
            for (size_t i = 0; i < wl.size(); ++i)
                if (wl[i] == z) vpos = int(i);
            CHECK(D.levi_equal(r, D.levi_dual_basis(Family::Y, vpos)));
        } else {
            bool allzero = true;
            for (auto& qv : r.v) allzero = allzero && qv.is_zero();
            CHECK(allzero);
        }
    }
    (void)t;

    // i_a^* o j_a = id on D_L^*, and j_a maps basis to basis
    for (auto fam : {Family::Y, Family::X}) {
        for (int v = 0; v < D.levi_size(); ++v) {
            DualElem lifted = D.section_j_a(D.levi_dual_basis(fam, v), fam);
            int vambient = rs.WL()[size_t(v)];
            CHECK(D.equal(lifted, D.dual_basis(fam, WIdx(vambient))));
            CHECK(D.levi_equal(D.restrict_L(lifted), D.levi_dual_basis(fam, v)));
        }
    }
    (void)s;
}

TEST_CASE("characteristic map: values, bullet identity, equivariance") {
    Setup S('A', 2, {0});
    DualModule& D = *S.dual;
    const RootSystem& rs = *S.rs;
    const QOps& q = S.q();

    CHECK(D.equal(D.char_map(S.alg->one()), D.one()));

    Weight lam{};
    lam[0] = 1;
    lam[1] = 1;
    DualElem ch = D.char_map(S.alg->x_of_weight(lam));
    for (WIdx w = 0; w < rs.order(); ++w)
        CHECK(S.alg->equal(q.to_S(ch.v[size_t(w)]), S.alg->x_of_weight(rs.act_weight(w, lam))));

    std::mt19937_64 rng(29);
    for (int iter = 0; iter < 4; ++iter) {
        SElem p = rand_selem(S, rng);
        // ch(p) = p bullet 1
        DualElem viaBullet = D.bullet(S.tw->from_q(q.from_S(p)), D.one());
        CHECK(D.equal(D.char_map(p), viaBullet));
        // W-equivariance: ch(z p) = delta_z bullet ch(p)
        for (WIdx z : {rs.simple(0), rs.simple(1)})
            CHECK(D.equal(D.char_map(S.alg->weyl_act(z, p)),
                          D.bullet_delta(z, D.char_map(p))));
    }
}

TEST_CASE("Borel map: base cases and degreewise surjectivity in A2") {
    Setup S('A', 2, {0});
    DualModule& D = *S.dual;
    std::mt19937_64 rng(31);
    CHECK(D.equal(D.borel_rho(S.alg->one(), S.alg->one()), D.one()));
    SElem p = rand_selem(S, rng);
    DualElem c = D.borel_rho(p, S.alg->one());
    for (auto& qv : c.v) CHECK(S.alg->equal(S.q().to_S(qv), p));

    RhoReport rep = D.rho_surjectivity_check(3);
    CHECK(rep.ok());
    for (auto& row : rep.rows) CHECK(row.image_dim == row.target_dim);
}

TEST_CASE("character traces: identity element and the index identity") {
    Setup S('A', 1, {0});
    auto [chiL, chi] = S.dual->character_trace(S.rs->identity());
    CHECK(S.alg->equal(chiL, S.alg->constant(Coeff(2))));
    CHECK(S.alg->equal(chi, S.alg->constant(Coeff(2))));
    // A1 with L = G: W^L = {e}, so chi_L = chi on the reflection too
    auto [chiLs, chis] = S.dual->character_trace(S.rs->simple(0));
    CHECK(S.alg->equal(chiLs, chis));

    Setup S2('A', 2, {0});
    for (WIdx v : S2.rs->WL()) {
        auto [cl, cc] = S2.dual->character_trace(v);
        SElem scaled = S2.alg->mul_coeff(cc, Coeff((long long)S2.rs->WupperL().size()));
        CHECK(S2.alg->equal(cl, scaled));
    }
}

TEST_CASE("bullet is an algebra action and W acts by ring automorphisms") {
    Setup S('A', 2, {0}, "add");
    DualModule& D = *S.dual;
    const RootSystem& rs = *S.rs;
    std::mt19937_64 rng(37);
    for (int iter = 0; iter < 3; ++iter) {
        DualElem f = rand_dstar(S, rng), g = rand_dstar(S, rng);
        QWElem h = S.tw->y_of(0), k = S.tw->x_of(1);
        CHECK(D.equal(D.bullet(S.tw->mul(h, k), f), D.bullet(h, D.bullet(k, f))));
        for (WIdx v : {rs.simple(0), rs.simple(1)}) {
            CHECK(D.equal(D.bullet_delta(v, D.mul(f, g)),
                          D.mul(D.bullet_delta(v, f), D.bullet_delta(v, g))));
        }
    }
}
