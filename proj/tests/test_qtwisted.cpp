#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fda/errors.hpp"
#include "fda/twisted.hpp"

#include <random>

using namespace fda;

namespace {

struct Setup {
    std::shared_ptr<const RootSystem> rs;
    std::shared_ptr<const Fgl> fgl;
    std::unique_ptr<Algebra> alg;
    std::unique_ptr<TwistedAlgebra> tw;

    Setup(char fam, int rank, std::vector<int> par, const char* law = "mult1",
          int trunc = -1) {
        rs = RootSystem::build(fam, rank, par);
        auto prec = PrecisionPolicy::for_rank(rank, rs->npos(), trunc);
        if (std::string(law) == "mult1")
            fgl = Fgl::multiplicative(CoeffRing::rationals(), Coeff(1), prec.workdeg);
        else if (std::string(law) == "add")
            fgl = Fgl::additive(CoeffRing::rationals(), prec.workdeg);
        else
            fgl = Fgl::generic(2, prec.workdeg);
        alg = std::make_unique<Algebra>(rs, fgl, prec);
        tw = std::make_unique<TwistedAlgebra>(*alg);
    }
    const QOps& q() const { return tw->q(); }
};

QElem rand_qelem(const Setup& S, std::mt19937_64& rng, bool with_den = true) {
    SElem s = S.alg->zero();
    for (int t = 0; t < 5; ++t) {
        int v[4] = {};
        for (int i = 0; i < S.rs->rank(); ++i) v[size_t(i)] = int(rng() % 3);
        s.s.add_term(exp_make(v, S.rs->rank()), Coeff((long long)(rng() % 9) - 4));
    }
    QElem qe = S.q().from_S(s);
    if (with_den && rng() % 2) {
        RootIdx b = RootIdx(rng() % size_t(S.rs->npos()));
        qe = S.q().mul(qe, S.q().inv_root_monomial({{b, 1}}));
    }
    return qe;
}

} // namespace

TEST_CASE("Q arithmetic: spec worked examples") {
    Setup S('A', 2, {0});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    RootIdx a = rs.simple_root(0), b = rs.simple_root(1);

    // x_alpha * (1/x_alpha) = 1
    QElem inva = q.inv_root_monomial({{a, 1}});
    QElem prod = q.mul(q.from_S(S.alg->x_of_root(a)), inva);
    CHECK(q.equal(prod, q.one()));

    // 1/x_alpha + 1/x_{-alpha} = kappa_alpha, reducible to S
    QElem sum = q.add(inva, q.inv_root_monomial({{rs.neg(a), 1}}));
    SElem red = q.to_S(sum);
    CHECK(S.alg->equal(red, S.alg->kappa(a)));

    // (1/x_alpha)(1/x_beta) has denominator {alpha:1, beta:1}
    QElem ab = q.mul(inva, q.inv_root_monomial({{b, 1}}));
    DenMap expect{{a, 1}, {b, 1}};
    std::sort(expect.begin(), expect.end());
    CHECK(ab.den == expect);

    // 1/x_{-alpha} = u_alpha / x_alpha, verified by multiplying back
    QElem invna = q.inv_root_monomial({{rs.neg(a), 1}});
    CHECK(invna.den == DenMap{{a, 1}});
    QElem back = q.mul(invna, q.from_S(S.alg->x_of_root(rs.neg(a))));
    CHECK(q.equal(back, q.one()));

    // 1/1 = 1
    CHECK(q.equal(q.inv_root_monomial({}), q.one()));

    // 1/x_G for A2: denominator {a, b, a+b}, numerator u_a u_b u_{a+b}
    std::vector<std::pair<RootIdx, int>> xg;
    for (RootIdx r = 0; r < rs.npos(); ++r) xg.emplace_back(rs.neg(r), 1);
    QElem invxg = q.inv_root_monomial(xg);
    CHECK(den_degree(invxg.den) == 3);
    SElem uuu = S.alg->one();
    for (RootIdx r = 0; r < rs.npos(); ++r) uuu = S.alg->mul(uuu, S.alg->u(r));
    CHECK(S.alg->equal(invxg.num, uuu));
}

TEST_CASE("weyl_act_q permutes and sign-normalizes denominators") {
    Setup S('A', 2, {});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    RootIdx a = rs.simple_root(0), b = rs.simple_root(1);
    QElem inva = q.inv_root_monomial({{a, 1}});

    // s_alpha(1/x_alpha) = 1/x_{-alpha} = u_alpha/x_alpha
    QElem img = q.weyl_act(rs.simple(0), inva);
    CHECK(q.equal(img, q.inv_root_monomial({{rs.neg(a), 1}})));
    CHECK(img.den == DenMap{{a, 1}});

    // e acts as identity
    CHECK(q.equal(q.weyl_act(rs.identity(), inva), inva));

    // s_beta(1/x_alpha) = 1/x_{alpha+beta}
    Weight ab{};
    for (int i = 0; i < 2; ++i)
        ab[size_t(i)] = rs.root(a)[size_t(i)] + rs.root(b)[size_t(i)];
    RootIdx apb = rs.root_index(ab);
    CHECK(q.equal(q.weyl_act(rs.simple(1), inva), q.inv_root_monomial({{apb, 1}})));
}

TEST_CASE("to_S clears denominators exactly") {
    Setup S('A', 2, {});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    RootIdx a = rs.simple_root(0), b = rs.simple_root(1);
    // x_a x_b / x_a = x_b
    QElem e1 = q.mul(q.from_S(S.alg->mul(S.alg->x_of_root(a), S.alg->x_of_root(b))),
                     q.inv_root_monomial({{a, 1}}));
    CHECK(S.alg->equal(q.to_S(e1), S.alg->x_of_root(b)));
    // 1/x_alpha is not in S
    CHECK(!q.try_to_S(q.inv_root_monomial({{a, 1}})).has_value());
    // x_alpha / x_{-alpha} = u_alpha
    QElem e2 = q.mul(q.from_S(S.alg->x_of_root(a)), q.inv_root_monomial({{rs.neg(a), 1}}));
    CHECK(S.alg->equal(q.to_S(e2), S.alg->u(a)));
}

TEST_CASE("Q ring axioms, normalization idempotence, action properties") {
    Setup S('B', 2, {}, "add");
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 6; ++iter) {
        QElem x = rand_qelem(S, rng), y = rand_qelem(S, rng), z = rand_qelem(S, rng);
        CHECK(q.equal(q.add(x, y), q.add(y, x)));
        CHECK(q.equal(q.mul(x, y), q.mul(y, x)));
        CHECK(q.equal(q.mul(q.mul(x, y), z), q.mul(x, q.mul(y, z))));
        CHECK(q.equal(q.mul(x, q.add(y, z)), q.add(q.mul(x, y), q.mul(x, z))));
        // to_S o embed = id
        SElem s = S.alg->x_of_root(RootIdx(rng() % size_t(rs.npos())));
        CHECK(S.alg->equal(q.to_S(q.from_S(s)), s));
        // normalization idempotent
        QElem r1 = q.reduce(x), r2 = q.reduce(r1);
        CHECK(r1.den == r2.den);
        CHECK(S.alg->equal(r1.num, r2.num));
        // weyl action is multiplicative and a group action
        WIdx w1 = WIdx(rng() % size_t(rs.order())), w2 = WIdx(rng() % size_t(rs.order()));
        CHECK(q.equal(q.weyl_act(w1, q.mul(x, y)),
                      q.mul(q.weyl_act(w1, x), q.weyl_act(w1, y))));
        CHECK(q.equal(q.weyl_act(rs.mul(w1, w2), x),
                      q.weyl_act(w1, q.weyl_act(w2, x))));
    }
}

TEST_CASE("twisted multiplication rule and identities") {
    Setup S('A', 2, {});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    TwistedAlgebra& tw = *S.tw;
    RootIdx a = rs.simple_root(0), b = rs.simple_root(1);

    // delta_z delta_y = delta_{zy}; delta_e is the identity
    for (WIdx z = 0; z < rs.order(); ++z)
        for (WIdx y = 0; y < rs.order(); ++y) {
            QWElem p = tw.mul(tw.delta(z), tw.delta(y));
            REQUIRE(p.c.size() == 1);
            CHECK(p.c.begin()->first == rs.mul(z, y));
            CHECK(q.equal(p.c.begin()->second, q.one()));
        }
    QWElem h = tw.mul(tw.y_of(0), tw.x_of(1));
    CHECK(tw.equal(tw.mul(h, tw.delta(rs.identity())), h));

    // (x_alpha delta_s)(x_beta delta_e) = x_alpha x_{s(beta)} delta_s
    QWElem lhs = tw.mul(tw.scale_q(tw.delta(rs.simple(0)), q.from_S(S.alg->x_of_root(a))),
                        tw.scale_q(tw.delta(rs.identity()), q.from_S(S.alg->x_of_root(b))));
    RootIdx sb = rs.act_root(rs.simple(0), b);
    QElem expect = q.from_S(S.alg->mul(S.alg->x_of_root(a), S.alg->x_of_root(sb)));
    REQUIRE(lhs.c.size() == 1);
    CHECK(q.equal(lhs.c.at(rs.simple(0)), expect));

    // associativity on random triples
    std::mt19937_64 rng(7);
    auto rand_qw = [&] {
        QWElem r;
        for (int t = 0; t < 3; ++t) {
            WIdx z = WIdx(rng() % size_t(rs.order()));
            r = tw.add(r, tw.scale_q(tw.delta(z), rand_qelem(S, rng)));
        }
        return r;
    };
    for (int iter = 0; iter < 4; ++iter) {
        QWElem p = rand_qw(), r = rand_qw(), t = rand_qw();
        CHECK(tw.equal(tw.mul(tw.mul(p, r), t), tw.mul(p, tw.mul(r, t))));
    }
}

TEST_CASE("push-pull and Demazure generators") {
    Setup S('A', 1, {0});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    TwistedAlgebra& tw = *S.tw;
    RootIdx a = rs.simple_root(0);

    // delta_s = 1 - x_alpha X_s
    QWElem xs = tw.x_of(0);
    QWElem rhs = tw.sub(tw.delta(rs.identity()),
                        tw.scale_q(xs, q.from_S(S.alg->x_of_root(a))));
    CHECK(tw.equal(rhs, tw.delta(rs.simple(0))));

    // A1 with full parabolic: Y_G = Y_s
    CHECK(tw.equal(tw.y_full(), tw.y_of(0)));

    // empty parabolic: Y_B = delta_e
    Setup SB('A', 1, {});
    CHECK(SB.tw->equal(SB.tw->y_parab(), SB.tw->delta(SB.rs->identity())));
}

TEST_CASE("y_seq: squares, L-compatible factorization, empty word") {
    Setup S('A', 2, {0});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    TwistedAlgebra& tw = *S.tw;
    RootIdx a = rs.simple_root(0);

    CHECK(tw.equal(tw.y_seq({}), tw.delta(rs.identity())));

    // Y_s^2 = kappa_alpha Y_s
    QWElem ys = tw.y_of(0);
    CHECK(tw.equal(tw.mul(ys, ys), tw.scale_q(ys, q.from_S(S.alg->kappa(a)))));

    // Y_{wv} = Y_w Y_v for w in W^L, v in W_L
    for (WIdx w : rs.WupperL())
        for (WIdx v : rs.WL()) {
            QWElem prod = tw.mul(tw.y_seq(rs.word_of(w)), tw.y_seq(rs.word_of(v)));
            CHECK(tw.equal(prod, tw.y_seq(rs.word_of(rs.mul(w, v)))));
        }
}

TEST_CASE("action on S: worked examples and the commutation identity") {
    Setup S('A', 2, {});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    TwistedAlgebra& tw = *S.tw;
    RootIdx a = rs.simple_root(0);

    // X_s . 1 = 0 and Y_s . 1 = kappa_alpha
    CHECK(tw.act_on_S(tw.x_of(0), q.one()).is_zero());
    CHECK(q.equal(tw.act_on_S(tw.y_of(0), q.one()), q.from_S(S.alg->kappa(a))));

    // X_s . x_alpha = 1 - u_alpha^{-1}
    QElem got = tw.act_on_S(tw.x_of(0), q.from_S(S.alg->x_of_root(a)));
    SElem expect = S.alg->sub(S.alg->one(), S.alg->invert(S.alg->u(a)));
    CHECK(S.alg->equal(q.to_S(got), expect));

    // q Y_s = Y_s s(q) + Delta_s(q) with Delta_s(q) = x_{-alpha}^{-1}(q - s(q))
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 5; ++iter) {
        QElem qq = rand_qelem(S, rng);
        QWElem lhs = tw.scale_q(tw.y_of(0), qq);
        QElem sq = q.weyl_act(rs.simple(0), qq);
        QWElem rhs = tw.mul(tw.y_of(0), tw.from_q(sq));
        QElem delta = q.mul(q.inv_root_monomial({{rs.neg(a), 1}}), q.sub(qq, sq));
        rhs = tw.add(rhs, tw.from_q(delta));
        CHECK(tw.equal(lhs, rhs));
    }
}

TEST_CASE("base change: A1 entries match the printed formulas") {
    Setup S('A', 1, {});
    const QOps& q = S.q();
    const RootSystem& rs = *S.rs;
    RootIdx a = rs.simple_root(0);
    WIdx s = rs.simple(0), e = rs.identity();

    const BaseChange& bcY = S.tw->base_change(Family::Y);
    CHECK(q.equal(bcY.a[size_t(s)][size_t(e)], q.inv_root_monomial({{rs.neg(a), 1}})));
    CHECK(q.equal(bcY.a[size_t(s)][size_t(s)], q.inv_root_monomial({{a, 1}})));
    CHECK(S.alg->equal(bcY.b[size_t(s)][size_t(e)], S.alg->neg(S.alg->u(a))));
    CHECK(S.alg->equal(bcY.b[size_t(s)][size_t(s)], S.alg->x_of_root(a)));

    const BaseChange& bcX = S.tw->base_change(Family::X);
    CHECK(S.alg->equal(bcX.b[size_t(s)][size_t(e)], S.alg->one()));
    CHECK(S.alg->equal(bcX.b[size_t(s)][size_t(s)], S.alg->neg(S.alg->x_of_root(a))));
}

TEST_CASE("base change inverts: A*B = identity over W") {
    for (auto fam : {Family::Y, Family::X}) {
        for (auto setup : {std::pair<char, int>{'A', 2}, {'B', 2}}) {
            Setup S(setup.first, setup.second, {0});
            const QOps& q = S.q();
            const RootSystem& rs = *S.rs;
            const BaseChange& bc = S.tw->base_change(fam);
            for (WIdx z = 0; z < rs.order(); ++z)
                for (WIdx t = 0; t < rs.order(); ++t) {
                    QElem acc = q.zero();
                    for (WIdx y = 0; y < rs.order(); ++y) {
                        if (bc.a[size_t(z)][size_t(y)].is_zero()) continue;
                        if (bc.b[size_t(y)][size_t(t)].is_zero()) continue;
                        acc = q.add(acc, q.mul_s(bc.a[size_t(z)][size_t(y)],
                                                 bc.b[size_t(y)][size_t(t)]));
                    }
                    if (z == t)
                        CHECK(q.equal(acc, q.one()));
                    else
                        CHECK(acc.is_zero());
                }
        }
    }
}

TEST_CASE("b_of_sequence: Kronecker rows, squares, and the support bound") {
    Setup S('A', 2, {0});
    const RootSystem& rs = *S.rs;
    TwistedAlgebra& tw = *S.tw;
    RootIdx a = rs.simple_root(0);

    // b_{I_z, z'} = delta_{z,z'}
    for (WIdx z = 0; z < rs.order(); ++z) {
        auto row = tw.b_of_sequence(rs.word_of(z), Family::Y);
        for (WIdx t = 0; t < rs.order(); ++t) {
            if (t == z)
                CHECK(S.alg->equal(row[size_t(t)], S.alg->one()));
            else
                CHECK(row[size_t(t)].is_zero());
        }
    }

    // b_{(s,s), s} = kappa_alpha and b_{(s,s), e} = 0
    auto row = tw.b_of_sequence({0, 0}, Family::Y);
    CHECK(S.alg->equal(row[size_t(rs.simple(0))], S.alg->kappa(a)));
    CHECK(row[size_t(rs.identity())].is_zero());

    // Lemma-style support bound: b_{I,y} != 0 implies y <= demazure(I);
    // and for I a positioned subsequence of I_z, y <= z (exhaustive, rank 2)
    std::vector<std::vector<int>> words{{0, 0},    {0, 1, 0}, {1, 0, 1},
                                        {0, 1, 1}, {1, 1, 0}, {0, 1, 0, 1}};
    for (auto& I : words) {
        auto r = tw.b_of_sequence(I, Family::Y);
        WIdx dz = rs.demazure_product(I);
        for (WIdx y = 0; y < rs.order(); ++y)
            if (!r[size_t(y)].is_zero()) CHECK(rs.bruhat_leq(y, dz));
    }
    for (WIdx z = 0; z < rs.order(); ++z) {
        const auto& word = rs.word_of(z);
        for (std::uint32_t m = 0; m < (1u << word.size()); ++m) {
            PositionedSubseq ss{&word, m};
            auto r = tw.b_of_sequence(ss.letters(), Family::Y);
            for (WIdx y = 0; y < rs.order(); ++y)
                if (!r[size_t(y)].is_zero()) CHECK(rs.bruhat_leq(y, z));
        }
    }
}

TEST_CASE("Y_P Y_{I rev} = Y_P (Y_I . 1) for words inside W_L") {
    Setup S('B', 2, {1});
    const QOps& q = S.q();
    TwistedAlgebra& tw = *S.tw;
    QWElem yp = tw.y_parab();
    for (auto& I : std::vector<std::vector<int>>{{1}, {1, 1}, {1, 1, 1}}) {
        std::vector<int> rev(I.rbegin(), I.rend());
        QWElem lhs = tw.mul(yp, tw.y_seq(rev));
        QElem yi1 = tw.act_on_S(tw.y_seq(I), q.one());
        QWElem rhs = tw.scale_q(yp, yi1);
        CHECK(tw.equal(lhs, rhs));
    }
}
