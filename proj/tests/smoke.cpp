#include "pgz/hecke.hpp"
#include "pgz/whittaker.hpp"

#include <iostream>

using namespace pgz;

int fails = 0;
#define CHECK(cond, msg)                                              \
    do {                                                              \
        if (!(cond)) {                                                \
            std::cerr << "[FAIL] " << msg << "\n";                    \
            ++fails;                                                  \
        } else {                                                      \
            std::cout << "[ok] " << msg << "\n";                      \
        }                                                             \
    } while (0)

int main() {
    LocalField Fi(3, ExtKind::Inert);
    LocalField Fs(3, ExtKind::Split);
    long q = 3;
    ExactScalar one = ExactScalar::one(q);

    // valuations / omega
    CHECK(Fi.val(Rat(9, 2)) == 2, "v_3(9/2) = 2");
    CHECK(Fi.val(Rat(1, 3)) == -1, "v_3(1/3) = -1");
    CHECK(Fi.omega(Rat(3)) == -1, "omega inert at p");
    CHECK(Fi.omega(Rat(2)) == 1, "omega inert at unit");

    // solve_norm
    KElem g = solve_norm(Fi, Rat(4), 8);
    CHECK(Fi.val(k_norm(Fi, g) - 4) >= 8, "solve_norm depth");

    // torus cosets
    auto tc = torus_cosets(Fi, 1);
    Rat tot = 0;
    for (auto& c : tc) tot += c.weight;
    CHECK(tc.size() == 4 && tot == Rat(4, 3), "inert torus cosets level 1");

    // P invariant and lifts
    GMat gm = tracefree_lift(Fs, Rat(3), 8);
    CHECK(P_invariant(Fs, gm).value() == Rat(3), "split tracefree lift");
    GMat gi = tracefree_lift(Fi, Rat(9), 10);
    CHECK(Fi.val(P_invariant(Fi, gi).value() - 9) >= 10, "inert tracefree lift");

    // max compact membership
    TorusChar triv_i = TorusChar::inert_trivial();
    CHECK(in_torus_times_maxcompact(Fi, triv_i, GMat::identity()) == one, "id in T GL2(o)");
    CHECK(in_torus_times_maxcompact(Fi, triv_i, GMat::diag(3, 1)).is_zero(), "diag(p,1) not in T GL2(o)");

    // linking anchors, inert q=3 (Example, unramified field extension)
    SchwartzOnG phi = SchwartzOnG::max_compact(Fi, triv_i);
    LinkingEngine eng(Fi, phi, phi);
    ExactScalar Vc = ExactScalar::from_rat(q, Rat(4, 3)); // vol_T(T)
    ExactScalar l1 = eng.translated(Rat(9), 1).value;
    std::cout << "  lln(x=9,b=1)   = " << l1.str() << "\n";
    CHECK(l1 == Vc, "compact example x=p^2, b=1");
    ExactScalar l2 = eng.translated(Rat(9), 3).value;
    std::cout << "  lln(x=9,b=3)   = " << l2.str() << "\n";
    CHECK(l2.is_zero(), "compact example x=p^2, b=p vanishes");
    ExactScalar l3 = eng.translated(Rat(4), 1).value; // x = 1+3 in 1+p
    std::cout << "  lln(x=4,b=1)   = " << l3.str() << "\n";
    CHECK(l3.is_zero(), "compact example x in 1+p, b=1 vanishes");
    ExactScalar l4 = eng.translated(Rat(4), 3).value; // b = (1-x)-shell
    std::cout << "  lln(x=4,b=3)   = " << l4.str() << "\n";

    // split anchors (Example, chi1 trivial)
    TorusChar triv_s = TorusChar::split(MultChar::trivial());
    SchwartzOnG phis = SchwartzOnG::max_compact(Fs, triv_s);
    LinkingEngine engs(Fs, phis, phis);
    ExactScalar s1 = engs.translated(Rat(3), 1).value;
    std::cout << "  split(x=3,b=1) = " << s1.str() << "\n";
    CHECK(s1 == ExactScalar::from_rat(q, Rat(8, 3)), "split example x=p, b=1 -> 8/3");
    ExactScalar s2 = engs.translated(Rat(3), 3).value;
    std::cout << "  split(x=3,b=3) = " << s2.str() << "\n";
    CHECK(s2 == ExactScalar::from_rat(q, Rat(2)), "split example x=p, b=p -> 2");

    // geometric Hecke anchors
    ExactScalar h0 = geometric_hecke(eng, Rat(9), Rat(3));
    CHECK(h0.is_zero(), "S_b compact x=p^2 b=p -> 0");
    ExactScalar h1 = geometric_hecke(eng, Rat(9), Rat(9));
    CHECK(h1 == Vc, "S_b compact x=p^2 b=p^2 -> Vc");
    ExactScalar h2 = geometric_hecke(engs, Rat(3), Rat(3));
    std::cout << "  Sb split       = " << h2.str() << "\n";
    CHECK(h2 == ExactScalar::from_rat(q, Rat(26, 3)), "S_b split x=p b=p -> 26/3");

    // zhang pairing anchors
    ExactScalar z1 = zhang_hecke_pairing(Fi, triv_i, Rat(9), 1);
    CHECK(z1 == Vc, "zhang inert x=p^2 b=1");
    ExactScalar z2 = zhang_hecke_pairing(Fi, triv_i, Rat(9), 3);
    CHECK(z2.is_zero(), "zhang inert x=p^2 b=p");
    TorusChar chi_i4 = TorusChar::split(MultChar::order_four());
    ExactScalar z3 = zhang_hecke_pairing(Fs, chi_i4, Rat(3), 1);
    CHECK(z3 == ExactScalar::from_rat(q, Rat(2)), "zhang split chi1(p)=i x=p b=1 -> 2");

    // newform anchors
    KirillovFunction we = newform(Fi, RepKind::EisensteinSeries, triv_i);
    CHECK(we.eval(Fi, 1) == one, "newform (1,omega) at 1");
    CHECK(we.eval(Fi, 3).is_zero(), "newform (1,omega) at p");
    CHECK(we.eval(Fi, 9) == ExactScalar::from_rat(q, Rat(1, 3)), "newform (1,omega) at p^2");

    // principal series section
    LocallyConstant2D Phi;
    Phi.terms.push_back({one, Coset1D::ball(0), Coset1D::ball(0)});
    ExactScalar ps = principal_series_section(Fi, Phi, MultChar::trivial(),
                                              MultChar::quadratic_unramified(), GMat::identity());
    CHECK(ps == ExactScalar::from_rat(q, Rat(3, 4)), "principal series section q/(q+1)");

    std::cout << (fails == 0 ? "ALL OK" : "FAILURES") << "\n";
    return fails == 0 ? 0 : 1;
}
