#include "h4/pgroups.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "h4/errors.hpp"

namespace h4 {

namespace {

// lexicographic index maps for the Sym^2 / Alt^2 / Alt^3 bases
int sym2_index(int i, int j, int d) {  // i <= j
    return i * d - i * (i - 1) / 2 + (j - i);
}
int alt2_index(int i, int j, int d) {  // i < j
    return i * d - i * (i + 1) / 2 + (j - i - 1);
}
int alt3_index(int i, int j, int k, int d) {  // i < j < k
    // count triples before (i,j,k) in lex order
    auto c2 = [](long long x) { return x * (x - 1) / 2; };
    auto c3 = [](long long x) { return x * (x - 1) * (x - 2) / 6; };
    long long idx = c3(d) - c3(d - i);   // triples starting below i
    idx += c2(d - i - 1) - c2(d - j);    // pairs (j', k') with i fixed, j' < j
    idx += k - j - 1;
    return static_cast<int>(idx);
}

}  // namespace

void ModuleWithAction::validate() const {
    for (const FpMat& g : generators) {
        if (g.rows() != dim || g.cols() != dim || g.p() != p)
            throw ValidationError("module '" + name + "': generator shape mismatch");
        if (!g.invertible())
            throw ValidationError("module '" + name + "': generator is not invertible mod " + std::to_string(p));
    }
}

ModuleWithAction dual_module(const ModuleWithAction& m) {
    ModuleWithAction out;
    out.p = m.p;
    out.dim = m.dim;
    out.name = "dual(" + m.name + ")";
    for (const FpMat& g : m.generators) out.generators.push_back(g.inverse().transpose());
    return out;
}

ModuleWithAction sym2_module(const ModuleWithAction& m) {
    int d = m.dim;
    int D = d * (d + 1) / 2;
    ModuleWithAction out;
    out.p = m.p;
    out.dim = D;
    out.name = "Sym2(" + m.name + ")";
    for (const FpMat& g : m.generators) {
        FpMat G(m.p, D, D);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                int src = sym2_index(i, j, d);
                // image of e_i e_j = (g e_i)(g e_j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        long long c = g.at(k, i) * g.at(l, j) % m.p;
                        if (!c) continue;
                        int a = std::min(k, l), b = std::max(k, l);
                        G.set(sym2_index(a, b, d), src, G.at(sym2_index(a, b, d), src) + c);
                    }
            }
        out.generators.push_back(G);
    }
    return out;
}

ModuleWithAction alt2_module(const ModuleWithAction& m) {
    int d = m.dim;
    int D = d * (d - 1) / 2;
    ModuleWithAction out;
    out.p = m.p;
    out.dim = D;
    out.name = "Alt2(" + m.name + ")";
    for (const FpMat& g : m.generators) {
        FpMat G(m.p, D, D);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                int src = alt2_index(i, j, d);
                for (int k = 0; k < d; ++k)
                    for (int l = k + 1; l < d; ++l) {
                        long long c = (g.at(k, i) * g.at(l, j) - g.at(l, i) * g.at(k, j)) % m.p;
                        if (!c) continue;
                        G.set(alt2_index(k, l, d), src, G.at(alt2_index(k, l, d), src) + c);
                    }
            }
        out.generators.push_back(G);
    }
    return out;
}

ModuleWithAction alt3_module(const ModuleWithAction& m) {
    int d = m.dim;
    int D = d * (d - 1) * (d - 2) / 6;
    ModuleWithAction out;
    out.p = m.p;
    out.dim = D;
    out.name = "Alt3(" + m.name + ")";
    for (const FpMat& g : m.generators) {
        FpMat G(m.p, D, D);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                for (int k = j + 1; k < d; ++k) {
                    int src = alt3_index(i, j, k, d);
                    for (int a = 0; a < d; ++a)
                        for (int b = a + 1; b < d; ++b)
                            for (int c = b + 1; c < d; ++c) {
                                // 3x3 minor det g[{a,b,c},{i,j,k}]
                                long long det =
                                    g.at(a, i) * (g.at(b, j) * g.at(c, k) - g.at(c, j) * g.at(b, k)) -
                                    g.at(b, i) * (g.at(a, j) * g.at(c, k) - g.at(c, j) * g.at(a, k)) +
                                    g.at(c, i) * (g.at(a, j) * g.at(b, k) - g.at(b, j) * g.at(a, k));
                                det %= m.p;
                                if (!det) continue;
                                G.set(alt3_index(a, b, c, d), src,
                                      G.at(alt3_index(a, b, c, d), src) + det);
                            }
                }
        out.generators.push_back(G);
    }
    return out;
}

ModuleWithAction line_twist(const ModuleWithAction& m, const std::vector<long long>& multipliers, int k) {
    if (multipliers.size() != m.generators.size())
        throw ValidationError("line_twist: one multiplier per generator required");
    ModuleWithAction out = m;
    out.name = m.name + " (x) L^" + std::to_string(k);
    for (size_t i = 0; i < m.generators.size(); ++i) {
        // the line inside Alt^2(E^*) transforms by a^{-1}; the k-th power by a^{-k}
        long long a = ((multipliers[i] % m.p) + m.p) % m.p;
        if (a == 0) throw ValidationError("line_twist: multiplier must be a unit");
        long long factor = 1;
        long long a_inv = FpMat::from_rows(m.p, {{a}}).inverse().at(0, 0);
        for (int e = 0; e < k; ++e) factor = factor * a_inv % m.p;
        for (int e = 0; e > k; --e) factor = factor * a % m.p;
        FpMat G = out.generators[i];
        for (int r = 0; r < G.rows(); ++r)
            for (int c = 0; c < G.cols(); ++c) G.set(r, c, G.at(r, c) * factor);
        out.generators[i] = G;
    }
    return out;
}

std::vector<FpMat> restrict_action(const std::vector<FpMat>& gens, const FpMat& basis) {
    std::vector<FpMat> out;
    for (const FpMat& g : gens) {
        FpMat X;
        if (!fp_solve(basis, g.mul(basis), X))
            throw ValidationError("restrict_action: span is not invariant under the action");
        out.push_back(X);
    }
    return out;
}

std::vector<FpMat> quotient_action(const std::vector<FpMat>& gens, const FpMat& sub) {
    int n = sub.rows(), s = sub.cols();
    FpMat P = complete_to_basis(sub);
    FpMat Pinv = P.inverse();
    std::vector<FpMat> out;
    for (const FpMat& g : gens) {
        FpMat A = Pinv.mul(g).mul(P);
        // invariance: the complement rows of the sub columns vanish
        for (int i = s; i < n; ++i)
            for (int j = 0; j < s; ++j)
                if (A.at(i, j) != 0)
                    throw ValidationError("quotient_action: subspace is not invariant");
        FpMat Q(sub.p(), n - s, n - s);
        for (int i = s; i < n; ++i)
            for (int j = s; j < n; ++j) Q.set(i - s, j - s, A.at(i, j));
        out.push_back(Q);
    }
    return out;
}

FpMat symplectic_basis(const FpMat& gram) {
    long long p = gram.p();
    int n = gram.rows();
    if (n % 2) throw ValidationError("symplectic_basis: odd dimension");
    // working complement basis starts as the identity
    FpMat space = FpMat::identity(p, n);
    std::vector<std::vector<long long>> basis;
    auto form = [&](const std::vector<long long>& u, const std::vector<long long>& v) {
        long long acc = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc = (acc + u[i] * gram.at(i, j) % p * v[j]) % p;
        return acc;
    };
    auto col = [&](const FpMat& m, int c) {
        std::vector<long long> v(m.rows());
        for (int i = 0; i < m.rows(); ++i) v[i] = m.at(i, c);
        return v;
    };
    while (space.cols() > 0) {
        std::vector<long long> a = col(space, 0);
        int partner = -1;
        for (int c = 1; c < space.cols(); ++c)
            if (form(a, col(space, c)) != 0) {
                partner = c;
                break;
            }
        if (partner < 0) throw ValidationError("symplectic_basis: form is degenerate");
        std::vector<long long> b = col(space, partner);
        long long s = form(a, b);
        long long s_inv = FpMat::from_rows(p, {{s}}).inverse().at(0, 0);
        for (auto& x : b) x = x * s_inv % p;  // omega(a, b) = 1
        basis.push_back(a);
        basis.push_back(b);
        // project the rest onto the symplectic complement of <a, b>
        std::vector<std::vector<long long>> rest;
        for (int c = 0; c < space.cols(); ++c) {
            if (c == 0 || c == partner) continue;
            std::vector<long long> v = col(space, c);
            long long va = form(v, a), vb = form(v, b);
            // v' = v - omega(v,b) a ... careful with signs: want omega(v', a) = omega(v', b) = 0
            // omega(v - x a - y b, a) = omega(v,a) - y omega(b,a) = va + y  => y = -va
            // omega(v - x a - y b, b) = omega(v,b) - x omega(a,b) = vb - x  => x = vb
            for (int i = 0; i < n; ++i) {
                long long t = v[i] - vb * a[i] % p + va * b[i] % p;
                v[i] = ((t % p) + p) % p;
            }
            rest.push_back(v);
        }
        // rebuild the remaining space, dropping dependents
        FpMat cand(p, n, static_cast<int>(rest.size()));
        for (size_t c = 0; c < rest.size(); ++c)
            for (int i = 0; i < n; ++i) cand.set(i, static_cast<int>(c), rest[c][i]);
        // keep an independent subset
        FpMat kept(p, n, 0);
        for (int c = 0; c < cand.cols(); ++c) {
            FpMat trial(p, n, kept.cols() + 1);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < kept.cols(); ++j) trial.set(i, j, kept.at(i, j));
                trial.set(i, kept.cols(), cand.at(i, c));
            }
            if (trial.rank() == trial.cols()) kept = trial;
        }
        space = kept;
    }
    FpMat out(p, n, n);
    for (size_t c = 0; c < basis.size(); ++c)
        for (int i = 0; i < n; ++i) out.set(i, static_cast<int>(c), basis[c][i]);
    return out;
}

ModuleWithAction alt2_dual_omega_complement(const ModuleWithAction& base, const FpMat& omega_gram) {
    long long p = base.p;
    int d = base.dim;
    FpMat sympl = symplectic_basis(omega_gram);  // throws when degenerate
    ModuleWithAction a2 = alt2_module(dual_module(base));
    // contraction with omega^{-1} = sum_r a_r ^ b_r
    FpMat functional(p, 1, a2.dim);
    for (int r = 0; r + 1 < d; r += 2) {
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                long long c = (sympl.at(i, r) * sympl.at(j, r + 1) - sympl.at(j, r) * sympl.at(i, r + 1)) % p;
                if (c) functional.set(0, alt2_index(i, j, d), functional.at(0, alt2_index(i, j, d)) + c);
            }
    }
    FpMat K = functional.kernel();
    ModuleWithAction out;
    out.p = p;
    out.dim = K.cols();
    out.name = "Alt2(dual(" + base.name + "))_omega";
    out.generators = restrict_action(a2.generators, K);
    return out;
}

ModuleWithAction alt3_dual_mod_wedge(const ModuleWithAction& base, const FpMat& omega_gram) {
    long long p = base.p;
    int d = base.dim;
    ModuleWithAction a3 = alt3_module(dual_module(base));
    // wedge map f_k -> f_k ^ omega, omega = sum_{i<j} Omega_ij f_i ^ f_j
    FpMat W(p, a3.dim, d);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                long long c = omega_gram.at(i, j);
                if (!c || k == i || k == j) continue;
                int a = k, b = i, e = j;
                long long sign = 1;
                // sort (k, i, j) with the permutation sign
                if (a > b) {
                    std::swap(a, b);
                    sign = -sign;
                }
                if (b > e) {
                    std::swap(b, e);
                    sign = -sign;
                }
                if (a > b) {
                    std::swap(a, b);
                    sign = -sign;
                }
                int idx = alt3_index(a, b, e, d);
                W.set(idx, k, W.at(idx, k) + sign * c);
            }
    }
    if (W.rank() != d) throw ValidationError("alt3_dual_mod_wedge: wedge map is not injective (degenerate form?)");
    ModuleWithAction out;
    out.p = p;
    out.dim = a3.dim - d;
    out.name = "Alt3(dual(" + base.name + ")) / wedge";
    out.generators = quotient_action(a3.generators, W);
    return out;
}

FixedPoints fixed_points(const ModuleWithAction& m) {
    FixedPoints fp;
    if (m.generators.empty()) {
        fp.dimension = m.dim;
        fp.basis = FpMat::identity(m.p, m.dim);
        return fp;
    }
    std::vector<FpMat> stacked;
    for (const FpMat& g : m.generators) {
        FpMat gm1 = g;
        for (int i = 0; i < m.dim; ++i) gm1.set(i, i, gm1.at(i, i) - 1);
        stacked.push_back(gm1);
    }
    FpMat big = FpMat::vstack(stacked);
    fp.basis = big.kernel();
    fp.dimension = fp.basis.cols();
    return fp;
}

// -- quadratic forms -------------------------------------------------------

QuadraticForm QuadraticForm::from_upper(const FpMat& c) {
    if (c.p() != 2 || c.rows() != c.cols()) throw ValidationError("QuadraticForm: needs a square F_2 matrix");
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (c.at(i, j)) throw ValidationError("QuadraticForm: coefficient matrix must be upper triangular");
    QuadraticForm q;
    q.dim = c.rows();
    q.upper = c;
    return q;
}

QuadraticForm QuadraticForm::hyperbolic(int m) {
    FpMat c(2, 2 * m, 2 * m);
    for (int r = 0; r < m; ++r) c.set(2 * r, 2 * r + 1, 1);
    return from_upper(c);
}

QuadraticForm QuadraticForm::anisotropic(int m) {
    FpMat c(2, 2 * m, 2 * m);
    c.set(0, 0, 1);
    c.set(0, 1, 1);
    c.set(1, 1, 1);
    for (int r = 1; r < m; ++r) c.set(2 * r, 2 * r + 1, 1);
    return from_upper(c);
}

long long QuadraticForm::evaluate(const std::vector<long long>& v) const {
    long long acc = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) acc ^= (upper.at(i, j) & v[i] & v[j] & 1);
    return acc;
}

FpMat QuadraticForm::bilinear() const {
    FpMat b(2, dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j) b.set(i, j, upper.at(std::min(i, j), std::max(i, j)));
    return b;
}

QuadraticFormAnalysis quadratic_form_analyze(const QuadraticForm& q) {
    if (q.dim > 24) throw ValidationError("quadratic_form_analyze: dimension cap is 24");
    QuadraticFormAnalysis out;
    out.bilinear = q.bilinear();
    out.nondegenerate = q.dim > 0 && out.bilinear.rank() == q.dim;
    std::vector<long long> v(q.dim, 0);
    long long total = 1LL << q.dim;
    for (long long mask = 0; mask < total; ++mask) {
        for (int i = 0; i < q.dim; ++i) v[i] = (mask >> i) & 1;
        if (q.evaluate(v))
            ++out.ones;
        else
            ++out.zeros;
    }
    out.arf = out.ones > out.zeros ? 1 : 0;
    return out;
}

// -- closed-form cohomology -------------------------------------------------

std::vector<FpMat> gl_standard_generators(long long p, int n) {
    std::vector<FpMat> gens;
    if (n == 0) return gens;
    if (p > 2) {
        // primitive root mod p
        long long root = 0;
        for (long long a = 2; a < p && !root; ++a) {
            long long x = a % p;
            int ord = 1;
            while (x != 1) {
                x = x * a % p;
                ++ord;
            }
            if (ord == p - 1) root = a;
        }
        FpMat d = FpMat::identity(p, n);
        d.set(0, 0, root);
        gens.push_back(d);
    }
    if (n >= 2) {
        FpMat cyc(p, n, n);
        for (int i = 0; i < n; ++i) cyc.set((i + 1) % n, i, 1);
        gens.push_back(cyc);
        FpMat tr = FpMat::identity(p, n);
        tr.set(0, 1, 1);
        gens.push_back(tr);
    }
    if (gens.empty()) gens.push_back(FpMat::identity(p, n));
    return gens;
}

FpMat standard_symplectic_gram(long long p, int m) {
    FpMat g(p, 2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        g.set(i, m + i, 1);
        g.set(m + i, i, p - 1);
    }
    return g;
}

namespace {
BigInt pow_big(long long p, long long e) {
    BigInt acc(1);
    for (long long i = 0; i < e; ++i) acc *= BigInt(p);
    return acc;
}

AbelianGroup elementary(long long p, long long rank) {
    std::vector<long long> f(rank, p);
    return AbelianGroup::from_orders(f);
}
}  // namespace

CohomologyDescription elem_abelian_cohomology(long long p, int n, int degree) {
    if (degree < 2 || degree > 4) throw ValidationError("elem_abelian_cohomology: degree must be 2, 3 or 4");
    if (n < 1) throw ValidationError("elem_abelian_cohomology: n must be >= 1");
    ModuleWithAction E;
    E.p = p;
    E.dim = n;
    E.name = "E";
    E.generators = gl_standard_generators(p, n);
    ModuleWithAction Ed = dual_module(E);
    Ed.name = "E*";

    CohomologyDescription out;
    out.p = p;
    out.degree = degree;
    if (degree == 2) {
        out.layers = {Ed};
        out.group = elementary(p, n);
    } else if (degree == 3) {
        ModuleWithAction a2 = alt2_module(Ed);
        a2.name = "Alt2(E*)";
        out.layers = {a2};
        out.group = elementary(p, a2.dim);
    } else if (p != 2) {
        ModuleWithAction s2 = sym2_module(Ed);
        s2.name = "Sym2(E*)";
        ModuleWithAction a3 = alt3_module(Ed);
        a3.name = "Alt3(E*)";
        out.layers = {s2, a3};
        out.group = elementary(p, s2.dim + a3.dim);
    } else {
        ModuleWithAction a2 = alt2_module(Ed);
        a2.name = "Alt2(E*)";
        ModuleWithAction a3 = alt3_module(Ed);
        a3.name = "Alt3(E*)";
        ModuleWithAction e = Ed;
        out.layers = {e, a2, a3};
        out.split = false;
        out.note = "filtration E*.Alt2(E*).Alt3(E*); the submodule E*.Alt2(E*) is isomorphic to Sym2(E*)";
        if (a3.dim == 0) {
            // no third layer: the whole group is the Sym2 submodule
            out.group = elementary(2, n + a2.dim);
        }
    }
    long long total_dim = 0;
    for (const auto& l : out.layers) total_dim += l.dim;
    out.order = pow_big(p, total_dim);
    out.exponent_bound = out.group ? out.group->exponent() : 8;
    return out;
}

CohomologyDescription extraspecial_odd_cohomology(long long p, int m, int degree,
                                                  const std::vector<std::pair<FpMat, long long>>& gsp_pairs) {
    if (p == 2) throw ValidationError("extraspecial_odd_cohomology: p must be odd");
    if (m < 2) throw ValidationError("extraspecial_odd_cohomology: m must be >= 2");
    if (degree < 2 || degree > 4) throw ValidationError("extraspecial_odd_cohomology: degree must be 2, 3 or 4");
    int d = 2 * m;
    FpMat omega = standard_symplectic_gram(p, m);

    ModuleWithAction E;
    E.p = p;
    E.dim = d;
    E.name = "E";
    std::vector<long long> multipliers;
    for (const auto& [g, a] : gsp_pairs) {
        if (g.rows() != d || g.cols() != d || g.p() != p)
            throw ValidationError("extraspecial_odd_cohomology: GSp matrix has the wrong shape");
        FpMat lhs = g.transpose().mul(omega).mul(g);
        FpMat rhs = omega;
        bool ok = true;
        for (int i = 0; i < d && ok; ++i)
            for (int j = 0; j < d && ok; ++j)
                if (lhs.at(i, j) != rhs.at(i, j) * a % p) ok = false;
        if (!ok)
            throw ValidationError("extraspecial_odd_cohomology: pair violates omega(gu,gv) = a omega(u,v)");
        E.generators.push_back(g);
        multipliers.push_back(a);
    }
    ModuleWithAction Ed = dual_module(E);
    Ed.name = "E*";

    CohomologyDescription out;
    out.p = p;
    out.degree = degree;
    if (degree == 2) {
        out.layers = {Ed};
        out.group = elementary(p, d);
    } else if (degree == 3) {
        ModuleWithAction c = alt2_dual_omega_complement(E, omega);
        c.name = "Alt2(E*)_omega";
        out.layers = {c};
        out.group = elementary(p, c.dim);
    } else if (m >= 3) {
        ModuleWithAction s2 = sym2_module(Ed);
        s2.name = "Sym2(E*)";
        ModuleWithAction q = alt3_dual_mod_wedge(E, omega);
        q.name = "Alt3(E*)/(E* ^ omega)";
        out.layers = {s2, q};
        out.group = elementary(p, s2.dim + q.dim);
    } else {
        // m == 2: filtered Sym2(E*).(Alt2(E*)_omega (x) L), extension undetermined
        ModuleWithAction s2 = sym2_module(Ed);
        s2.name = "Sym2(E*)";
        ModuleWithAction c = alt2_dual_omega_complement(E, omega);
        c.name = "Alt2(E*)_omega";
        if (!multipliers.empty()) c = line_twist(c, multipliers, 1);
        out.layers = {s2, c};
        out.split = false;
        out.extension_known = false;
        out.note = "possibly nontrivial extension of Alt2(E*)_omega (x) L by Sym2(E*)";
        out.exponent_bound = p * p;
    }
    long long total_dim = 0;
    for (const auto& l : out.layers) total_dim += l.dim;
    out.order = pow_big(p, total_dim);
    if (out.group) out.exponent_bound = out.group->exponent();
    return out;
}

CohomologyDescription extraspecial_two_h4(int m, int arf) {
    if (m < 2) throw ValidationError("extraspecial_two_h4: m must be >= 2");
    if (arf != 0 && arf != 1) throw ValidationError("extraspecial_two_h4: arf must be 0 or 1");
    int d = 2 * m;
    auto c2 = [](long long x) { return x * (x - 1) / 2; };
    auto c3 = [](long long x) { return x * (x - 1) * (x - 2) / 6; };
    long long dim_x = c2(d) + c3(d);

    CohomologyDescription out;
    out.p = 2;
    out.degree = 4;
    out.split = false;

    ModuleWithAction e{2, d, {}, "E*"};
    ModuleWithAction a2{2, static_cast<int>(c2(d)), {}, "Alt2(E*)"};
    ModuleWithAction a3q{2, static_cast<int>(c3(d) - d), {}, "Alt3(E*)/E*"};
    out.layers = {e, a2, a3q};

    if (m == 2) {
        if (arf == 0) {
            // plus type: X.4
            out.layers.push_back({2, 1, {}, "central subquotient (bottom of Z/4)"});
            out.layers.push_back({2, 1, {}, "central subquotient (top of Z/4)"});
            std::vector<long long> f(9, 2);
            f.push_back(8);
            out.group = AbelianGroup::from_orders(f);
            out.note = "X.4 with X = E*.Alt2(E*).Alt3(E*)/E* of order 2^10";
        } else {
            out.layers.push_back({2, 1, {}, "central subquotient (Z/2)"});
            std::vector<long long> f(9, 2);
            f.push_back(4);
            out.group = AbelianGroup::from_orders(f);
            out.note = "X.2 with X = E*.Alt2(E*).Alt3(E*)/E* of order 2^10";
        }
    } else {
        out.layers.push_back({2, 1, {}, "central subquotient (Z/2)"});
        std::vector<long long> f(dim_x - 1, 2);
        f.push_back(4);
        out.group = AbelianGroup::from_orders(f);
        out.note = "(E*.Alt2(E*).Alt3(E*)/E*).2, independent of the Arf invariant";
    }
    long long total_dim = 0;
    for (const auto& l : out.layers) total_dim += l.dim;
    out.order = pow_big(2, total_dim);
    out.exponent_bound = out.group->exponent();
    return out;
}

std::pair<CohomologyDescription, CohomologyDescription> extraspecial_two_low(int m, int arf) {
    if (m < 2) throw ValidationError("extraspecial_two_low: m must be >= 2");
    int d = 2 * m;
    QuadraticForm q = arf ? QuadraticForm::anisotropic(m) : QuadraticForm::hyperbolic(m);

    CohomologyDescription h1;
    h1.p = 2;
    h1.degree = 1;
    h1.layers = {{2, d, {}, "E*"}};
    h1.group = elementary(2, d);
    h1.order = pow_big(2, d);
    h1.exponent_bound = 2;

    CohomologyDescription h2;
    h2.p = 2;
    h2.degree = 2;
    int a2dim = d * (d - 1) / 2;
    h2.layers = {{2, a2dim - 1, {}, "Alt2(E*)/B_Q"}};
    h2.group = elementary(2, a2dim - 1);
    h2.order = pow_big(2, a2dim - 1);
    h2.exponent_bound = 2;
    h2.note = "quotient by the polar form of Q (Arf " + std::to_string(quadratic_form_analyze(q).arf) + ")";
    return {h1, h2};
}

// -- PolyF2 / Sq1 ------------------------------------------------------------

PolyF2 PolyF2::variable(int i, int nvars) {
    std::vector<int> e(nvars, 0);
    e[i] = 1;
    return monomial(e);
}

PolyF2 PolyF2::monomial(const std::vector<int>& exponents) {
    PolyF2 f(static_cast<int>(exponents.size()));
    f.terms_.insert(exponents);
    return f;
}

PolyF2 PolyF2::of_quadratic_form(const QuadraticForm& q) {
    PolyF2 f(q.dim);
    for (int i = 0; i < q.dim; ++i)
        for (int j = i; j < q.dim; ++j)
            if (q.upper.at(i, j)) {
                std::vector<int> e(q.dim, 0);
                e[i] += 1;
                e[j] += 1;
                f = f + monomial(e);
            }
    return f;
}

PolyF2 PolyF2::operator+(const PolyF2& o) const {
    PolyF2 out(std::max(nvars_, o.nvars_));
    auto pad = [&](const std::vector<int>& e) {
        std::vector<int> x = e;
        x.resize(out.nvars_, 0);
        return x;
    };
    for (const auto& t : terms_) {
        auto e = pad(t);
        if (!out.terms_.erase(e)) out.terms_.insert(e);
    }
    for (const auto& t : o.terms_) {
        auto e = pad(t);
        if (!out.terms_.erase(e)) out.terms_.insert(e);
    }
    return out;
}

PolyF2 PolyF2::operator*(const PolyF2& o) const {
    PolyF2 out(std::max(nvars_, o.nvars_));
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            std::vector<int> e(out.nvars_, 0);
            for (size_t i = 0; i < a.size(); ++i) e[i] += a[i];
            for (size_t i = 0; i < b.size(); ++i) e[i] += b[i];
            if (!out.terms_.erase(e)) out.terms_.insert(e);
        }
    return out;
}

std::string PolyF2::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        bool any = false;
        for (size_t i = 0; i < t.size(); ++i) {
            if (!t[i]) continue;
            if (any) os << "*";
            os << "x" << i;
            if (t[i] > 1) os << "^" << t[i];
            any = true;
        }
        if (!any) os << "1";
        first = false;
    }
    return os.str();
}

PolyF2 sq1(const PolyF2& f) {
    PolyF2 out(f.nvars());
    for (const auto& t : f.terms()) {
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] % 2 == 0) continue;  // even exponents die mod 2
            std::vector<int> e = t;
            e[i] += 1;
            out = out + PolyF2::monomial(e);
        }
    }
    return out;
}

std::optional<std::vector<long long>> sq1_image_as_alt2(const PolyF2& f) {
    int d = f.nvars();
    // expect a sum of x_i^2 x_j + x_i x_j^2 blocks
    std::map<std::pair<int, int>, std::pair<bool, bool>> seen;  // pair -> (has i^2 j, has i j^2)
    for (const auto& t : f.terms()) {
        int two = -1, one = -1;
        int total = 0;
        for (int i = 0; i < d; ++i) {
            total += t[i];
            if (t[i] == 2)
                two = i;
            else if (t[i] == 1)
                one = i;
            else if (t[i] != 0)
                return std::nullopt;
        }
        if (total != 3 || two < 0 || one < 0) return std::nullopt;
        int i = std::min(two, one), j = std::max(two, one);
        if (two == i)
            seen[{i, j}].first = true;
        else
            seen[{i, j}].second = true;
    }
    std::vector<long long> coords(static_cast<size_t>(d) * (d - 1) / 2, 0);
    for (auto& [pair, flags] : seen) {
        if (!(flags.first && flags.second)) return std::nullopt;  // not in the Sq1 image
        coords[alt2_index(pair.first, pair.second, d)] = 1;
    }
    return coords;
}

// -- extraspecial group -------------------------------------------------------

ExtraspecialGroup::ExtraspecialGroup(long long p, FpMat omega_gram)
    : p_(p), n_(omega_gram.rows()), gram_(std::move(omega_gram)) {
    if (gram_.rows() != gram_.cols() || gram_.p() != p_)
        throw ValidationError("ExtraspecialGroup: omega must be a square matrix mod p");
}

BigInt ExtraspecialGroup::order() const { return pow_big(p_, 1 + n_); }

ExtraspecialGroup::Elt ExtraspecialGroup::identity() const { return Elt{0, std::vector<long long>(n_, 0)}; }

ExtraspecialGroup::Elt ExtraspecialGroup::make(long long z, std::vector<long long> u) const {
    if (static_cast<int>(u.size()) != n_) throw ValidationError("ExtraspecialGroup: element rank mismatch");
    Elt e;
    e.z = ((z % p_) + p_) % p_;
    e.u = std::move(u);
    for (auto& x : e.u) x = ((x % p_) + p_) % p_;
    return e;
}

long long ExtraspecialGroup::omega(const std::vector<long long>& u, const std::vector<long long>& v) const {
    long long acc = 0;
    for (int i = 0; i < n_; ++i) {
        if (!u[i]) continue;
        for (int j = 0; j < n_; ++j) acc = (acc + u[i] * gram_.at(i, j) % p_ * v[j]) % p_;
    }
    return acc;
}

ExtraspecialGroup::Elt ExtraspecialGroup::mul(const Elt& a, const Elt& b) const {
    Elt c;
    c.z = (a.z + b.z + omega(a.u, b.u)) % p_;
    c.u.resize(n_);
    for (int i = 0; i < n_; ++i) c.u[i] = (a.u[i] + b.u[i]) % p_;
    return c;
}

ExtraspecialGroup::Elt ExtraspecialGroup::inverse(const Elt& a) const {
    Elt c;
    c.z = ((-a.z + omega(a.u, a.u)) % p_ + p_) % p_;
    c.u.resize(n_);
    for (int i = 0; i < n_; ++i) c.u[i] = (p_ - a.u[i]) % p_;
    return c;
}

long long ExtraspecialGroup::element_order(const Elt& a) const {
    Elt x = a;
    Elt e = identity();
    long long ord = 1;
    while (!(x == e)) {
        x = mul(x, a);
        ++ord;
        if (ord > p_ * p_ * p_) throw InternalError("ExtraspecialGroup: runaway element order");
    }
    return ord;
}

std::vector<ExtraspecialGroup::Elt> ExtraspecialGroup::elements() const {
    std::vector<Elt> out;
    std::vector<long long> u(n_, 0);
    BigInt count = order();
    if (!count.fits_int64() || count.to_int64() > 2000000)
        throw ValidationError("ExtraspecialGroup: too large to enumerate");
    long long total_u = 1;
    for (int i = 0; i < n_; ++i) total_u *= p_;
    for (long long mask = 0; mask < total_u; ++mask) {
        long long m = mask;
        for (int i = 0; i < n_; ++i) {
            u[i] = m % p_;
            m /= p_;
        }
        for (long long z = 0; z < p_; ++z) out.push_back(Elt{z, u});
    }
    return out;
}

bool ExtraspecialGroup::center_is_z() const {
    // commutator of t^u and t^v is z^{omega(u,v) - omega(v,u)}; the center is
    // z-only iff the antisymmetrization has no radical
    FpMat b(p_, n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) b.set(i, j, gram_.at(i, j) - gram_.at(j, i));
    return b.rank() == n_;
}

// -- helpers -----------------------------------------------------------------

FpMat orthogonal_transvection(const QuadraticForm& q, const std::vector<long long>& v) {
    if (q.evaluate(v) != 1) throw ValidationError("orthogonal_transvection: Q(v) must be 1");
    FpMat b = q.bilinear();
    FpMat t = FpMat::identity(2, q.dim);
    for (int j = 0; j < q.dim; ++j) {
        // t(e_j) = e_j + B(e_j, v) v
        long long coeff = 0;
        for (int i = 0; i < q.dim; ++i) coeff ^= (b.at(j, i) & v[i] & 1);
        if (coeff)
            for (int i = 0; i < q.dim; ++i)
                if (v[i]) t.set(i, j, t.at(i, j) + 1);
    }
    return t;
}

std::vector<FpMat> parse_matrix_blocks(const std::string& text, long long p) {
    std::vector<FpMat> out;
    std::vector<std::vector<long long>> rows;
    std::istringstream in(text);
    std::string line;
    auto flush = [&]() {
        if (rows.empty()) return;
        out.push_back(FpMat::from_rows(p, rows));
        rows.clear();
    };
    while (std::getline(in, line)) {
        // strip comments
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<long long> row;
        std::string tok;
        while (ls >> tok) {
            if (tok == ".")
                row.push_back(0);
            else
                row.push_back(std::stoll(tok));
        }
        if (row.empty())
            flush();
        else
            rows.push_back(row);
    }
    flush();
    return out;
}

std::vector<FpMat> load_matrix_file(const std::string& path, long long p) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_matrix_blocks(ss.str(), p);
}

InvariantSymplectic find_invariant_symplectic(const std::vector<FpMat>& gens) {
    if (gens.empty()) throw ValidationError("find_invariant_symplectic: no generators");
    long long p = gens[0].p();
    int d = gens[0].rows();
    int D = d * (d - 1) / 2;
    auto a2i = [&](int i, int j) { return alt2_index(i, j, d); };

    std::vector<long long> units;
    for (long long a = 1; a < p; ++a) units.push_back(a);
    size_t k = gens.size();
    std::vector<size_t> idx(k, 0);

    long long combos = 1;
    for (size_t i = 0; i < k; ++i) {
        combos *= static_cast<long long>(units.size());
        if (combos > 4096) throw ValidationError("find_invariant_symplectic: multiplier search too large");
    }

    for (long long combo = 0; combo < combos; ++combo) {
        long long c = combo;
        std::vector<long long> mult(k);
        for (size_t i = 0; i < k; ++i) {
            mult[i] = units[c % units.size()];
            c /= units.size();
        }
        // linear system: for each generator g, (g^T W g)_{ij} = a W_{ij}
        FpMat sys(p, static_cast<int>(k) * D, D);
        int row = 0;
        for (size_t gi = 0; gi < k; ++gi) {
            const FpMat& g = gens[gi];
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j, ++row) {
                    for (int r = 0; r < d; ++r)
                        for (int s = r + 1; s < d; ++s) {
                            long long coeff = (g.at(r, i) * g.at(s, j) - g.at(s, i) * g.at(r, j)) % p;
                            sys.set(row, a2i(r, s), sys.at(row, a2i(r, s)) + coeff);
                        }
                    sys.set(row, a2i(i, j), sys.at(row, a2i(i, j)) - mult[gi]);
                }
        }
        FpMat ker = sys.kernel();
        if (ker.cols() != 1) continue;
        FpMat W(p, d, d);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                long long w = ker.at(a2i(i, j), 0);
                W.set(i, j, w);
                W.set(j, i, p - w);
            }
        if (W.rank() != d) continue;  // want a nondegenerate form
        InvariantSymplectic out;
        out.gram = W;
        out.multipliers = mult;
        return out;
    }
    throw ValidationError("find_invariant_symplectic: no multiplier tuple admits a unique invariant line");
}

}  // namespace h4
