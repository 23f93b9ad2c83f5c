#include "qfact/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <set>
#include <thread>

#include "qfact/clifford.hpp"
#include "qfact/eichler_monoid.hpp"
#include "qfact/error.hpp"
#include "qfact/factorize.hpp"
#include "qfact/io.hpp"
#include "qfact/sampling.hpp"
#include "qfact/zpk.hpp"

namespace qfact {

namespace {

using nlohmann::json;

/// Instance count and first counterexample of a running check.
struct Tally {
    std::size_t instances = 0;
    json counterexample;
    json context; ///< what was being checked, attached to exceptions

    bool ok() const { return counterexample.is_null(); }
    void fail(json j) {
        if (ok()) counterexample = std::move(j);
    }
};

struct Level {
    long p;
    int n;
};

const std::vector<Level>& eichler_levels() {
    static const std::vector<Level> levels{{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    return levels;
}

int sample_count(const VerifyConfig& cfg, int fallback) { return cfg.samples.value_or(fallback); }

std::uint64_t seed_for(const VerifyConfig& cfg, int id, long p, int n = 0) {
    return derive_seed(cfg.seed, {static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(p),
                                  static_cast<std::uint64_t>(n)});
}

EichlerMonoid make_monoid(const VerifyConfig& cfg, const EichlerOrder& R, int bound) {
    if (cfg.atom_table) return EichlerMonoid(cfg.atom_table(R, bound));
    return EichlerMonoid(R, bound);
}

json where(const EichlerOrder& R) { return {{"p", R.prime()}, {"n", R.level()}}; }

json with_matrix(const EichlerOrder& R, const Mat2& A) {
    json j = where(R);
    j["matrix"] = io::to_json(A);
    return j;
}

Mat2 inverse(const Mat2& E) { return left_divide(E, Mat2::identity()); }

int norm_val(const EichlerOrder& R, const Mat2& A) { return R.norm_valuation(A).value(); }

// ---- element pools shared between checks -------------------------------

Mat2 min_delta_witness(const EichlerOrder& R) {
    const Rational p = R.dvr().pi_power(1);
    const Rational pn = R.dvr().pi_power(R.level());
    return {p, pn, p, p * p + pn};
}

std::vector<Mat2> off_radical_samples(const VerifyConfig& cfg, const EichlerOrder& R) {
    Rng rng(seed_for(cfg, 2, R.prime(), R.level()));
    std::vector<Mat2> out;
    for (int i = 0; i < sample_count(cfg, 50); ++i)
        out.push_back(random_eichler_element(rng, R, 4, SampleKind::OffRadical));
    return out;
}

std::vector<Mat2> radical_samples(const VerifyConfig& cfg, const EichlerOrder& R) {
    Rng rng(seed_for(cfg, 5, R.prime(), R.level()));
    std::vector<Mat2> out;
    for (int i = 0; i < sample_count(cfg, 50); ++i)
        out.push_back(random_eichler_element(rng, R, 6, SampleKind::InRadical));
    return out;
}

/// Mixture of generic elements, products of atoms and long atoms, so that
/// both atoms and non-atoms of every class show up.
std::vector<Mat2> atom_check_samples(const VerifyConfig& cfg, const EichlerOrder& R) {
    Rng rng(seed_for(cfg, 3, R.prime(), R.level()));
    const auto atoms = R.enumerate_atoms(3);
    std::vector<Mat2> out;
    const int count = sample_count(cfg, 200);
    while (static_cast<int>(out.size()) < count) {
        Mat2 A;
        switch (rng.uniform(0, 3)) {
        case 0:
            A = random_eichler_element(rng, R, 5, SampleKind::AnyNonUnit);
            break;
        case 1: {
            A = random_eichler_unit(rng, R);
            const auto parts = rng.uniform(1, 3);
            for (int i = 0; i < parts; ++i) A = A * rng.pick(atoms).matrix * random_eichler_unit(rng, R);
            break;
        }
        case 2: {
            const auto v = static_cast<int>(rng.uniform(1, 5));
            A = random_eichler_unit(rng, R) * R.long_atom(random_with_valuation(rng, R.dvr(), v)) *
                random_eichler_unit(rng, R);
            break;
        }
        default:
            A = random_eichler_unit(rng, R) * rng.pick(atoms).matrix * random_eichler_unit(rng, R);
        }
        if (R.is_unit(A) || A.det().is_zero() || norm_val(R, A) > 5) continue;
        out.push_back(A);
    }
    return out;
}

Mat2 pi_power_matrix(const EichlerOrder& R, int m) {
    const Rational q = R.dvr().pi_power(m);
    return Mat2::diag(q, q);
}

// ---- checks 1-8, 12: Eichler orders -----------------------------------------

void check_min_delta(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        const Mat2 A = min_delta_witness(R);
        t.context = with_matrix(R, A);
        auto M = make_monoid(cfg, R, norm_val(R, A));
        const auto s = enumerate_factorizations(M, A);
        const auto lengths = lengths_of(s);
        const auto quick = length_set(M, A);
        ++t.instances;
        if (lengths != std::vector<int>{2, 3} || quick != lengths) {
            json j = t.context;
            j["lengths"] = lengths;
            j["length_mask_lengths"] = quick;
            t.fail(j);
            return;
        }
    }
}

void check_unique_off_radical(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 4);
        for (const auto& A : off_radical_samples(cfg, R)) {
            t.context = with_matrix(R, A);
            const auto s = enumerate_factorizations(M, A);
            const auto count = count_factorizations(M, A);
            const auto lengths = lengths_of(s);
            ++t.instances;
            if (s.size() != 1 || count != 1 || lengths != std::vector<int>{norm_val(R, A)}) {
                json j = t.context;
                j["factorizations"] = s.size();
                j["counted"] = count;
                j["lengths"] = lengths;
                t.fail(j);
                return;
            }
        }
    }
}

void check_atom_classification(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 5);
        const auto& table = M.table();
        for (const auto& A : atom_check_samples(cfg, R)) {
            t.context = with_matrix(R, A);
            const int v = norm_val(R, A);
            // Exhaustive exact search over the canonical atoms.
            bool oracle_atom = true;
            std::vector<std::size_t> dividing;
            for (std::size_t i = 0; i < table.atoms().size(); ++i) {
                const auto& V = table.atoms()[i];
                if (V.norm_valuation > v) continue;
                const Mat2 X = left_divide(V.matrix, A);
                if (!R.contains(X)) continue;
                dividing.push_back(i);
                if (!R.is_unit(X)) oracle_atom = false;
            }
            const bool fast = R.is_atom(A);
            const auto indexed = table.dividing_indices(A);
            ++t.instances;
            if (fast != oracle_atom || indexed != dividing || dividing.empty()) {
                json j = t.context;
                j["is_atom"] = fast;
                j["oracle_is_atom"] = oracle_atom;
                j["left_divisor_count"] = dividing.size();
                j["table_left_divisor_count"] = indexed.size();
                t.fail(j);
                return;
            }
        }
    }
}

void check_canonical_associates(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 5);
        const auto& atoms = M.table().atoms();
        for (const auto& A : atom_check_samples(cfg, R)) {
            if (!R.is_atom(A)) continue;
            t.context = with_matrix(R, A);
            const int v = norm_val(R, A);
            const auto canon = R.canonical_right_associate(A);
            std::vector<std::size_t> matches;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i].norm_valuation == v && R.right_associated(atoms[i].matrix, A)) matches.push_back(i);
            ++t.instances;
            if (matches.size() != 1 || atoms[matches[0]].matrix != canon.representative ||
                canon.representative * canon.unit != A) {
                json j = t.context;
                j["matching_representatives"] = matches.size();
                j["canonical"] = io::to_json(canon.tag);
                t.fail(j);
                return;
            }
        }
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (atoms[i].norm_valuation > 3) continue;
            for (std::size_t k = i + 1; k < atoms.size(); ++k) {
                if (atoms[k].norm_valuation != atoms[i].norm_valuation) continue;
                ++t.instances;
                if (R.right_associated(atoms[i].matrix, atoms[k].matrix)) {
                    json j = where(R);
                    j["first"] = io::to_json(atoms[i].tag);
                    j["second"] = io::to_json(atoms[k].tag);
                    t.fail(j);
                    return;
                }
            }
        }
    }
}

void check_radical_min_length(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 6);
        for (const auto& A : radical_samples(cfg, R)) {
            t.context = with_matrix(R, A);
            const auto lengths = length_set(M, A);
            ++t.instances;
            if (lengths.empty() || lengths.front() > n + 5) {
                json j = t.context;
                j["lengths"] = lengths;
                t.fail(j);
                return;
            }
        }
    }
}

void check_catenary_delta(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 6);
        std::vector<Mat2> pool{min_delta_witness(R)};
        for (const auto& A : off_radical_samples(cfg, R)) pool.push_back(A);
        for (const auto& A : radical_samples(cfg, R)) pool.push_back(A);
        for (const auto& A : pool) {
            t.context = with_matrix(R, A);
            const auto prof = length_profile(M, A);
            const int max_delta = prof.delta.empty() ? 0 : prof.delta.back();
            ++t.instances;
            if (prof.catenary > n + 6 || max_delta > n + 4) {
                json j = t.context;
                j["profile"] = io::to_json(prof);
                t.fail(j);
                return;
            }
        }
    }
}

void check_unbounded_elasticity(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 6);
        for (int m = 1; m <= 3; ++m) {
            const Mat2 A = pi_power_matrix(R, m);
            t.context = with_matrix(R, A);
            const auto lengths = length_set(M, A);
            ++t.instances;
            auto has = [&](int k) { return std::find(lengths.begin(), lengths.end(), k) != lengths.end(); };
            // max L / min L >= 2m / 2 = m certifies rho_2 >= m.
            if (!has(2) || !has(2 * m) || lengths.front() != 2) {
                json j = t.context;
                j["m"] = m;
                j["lengths"] = lengths;
                t.fail(j);
                return;
            }
        }
    }
}

using Rigid = RigidFactorization<Mat2>;

/// Moves random units across the atom boundaries; the result is congruent.
Rigid shuffle_units(Rng& rng, const EichlerOrder& R, Rigid z) {
    const auto moves = rng.uniform(0, 2);
    for (int m = 0; m < moves && !z.atoms.empty(); ++m) {
        const Mat2 E = random_eichler_unit(rng, R);
        const auto pos = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(z.atoms.size()) - 1));
        if (pos == 0)
            z.leading_unit = z.leading_unit * E;
        else
            z.atoms[pos - 1] = z.atoms[pos - 1] * E;
        z.atoms[pos] = inverse(E) * z.atoms[pos];
    }
    return z;
}

/// x * z with the leading unit of z absorbed into the last atom of x.
Rigid concatenate(const Rigid& x, const Rigid& z) {
    Rigid out = x;
    out.atoms.back() = out.atoms.back() * z.leading_unit;
    out.atoms.insert(out.atoms.end(), z.atoms.begin(), z.atoms.end());
    return out;
}

Rigid random_factorization(Rng& rng, const EichlerOrder& R, const std::vector<AtomEntry>& short_atoms) {
    Rigid x{random_eichler_unit(rng, R), {}};
    const auto k = rng.uniform(1, 2);
    for (int i = 0; i < k; ++i) {
        Mat2 V = rng.pick(short_atoms).matrix;
        if (rng.chance(1, 2)) V = V * random_eichler_unit(rng, R);
        x.atoms.push_back(V);
    }
    return x;
}

void check_distance_axioms(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 6);
        Rng rng(seed_for(cfg, 8, p, n));
        std::vector<Mat2> pool{min_delta_witness(R)};
        for (int m = 1; m <= 3; ++m) pool.push_back(pi_power_matrix(R, m));
        for (const auto& A : off_radical_samples(cfg, R)) pool.push_back(A);
        for (const auto& A : radical_samples(cfg, R)) pool.push_back(A);
        std::vector<AtomEntry> short_atoms;
        for (const auto& e : M.table().atoms())
            if (e.norm_valuation <= 2) short_atoms.push_back(e);

        std::map<Mat2, std::pair<FactorizationSet<Mat2>, DistanceTable>> cache;
        const int draws = sample_count(cfg, 125);
        for (int draw = 0; draw < draws; ++draw) {
            const Mat2& A = rng.pick(pool);
            t.context = with_matrix(R, A);
            auto it = cache.find(A);
            if (it == cache.end()) {
                auto s = enumerate_factorizations(M, A);
                auto table = build_distance_table(M, s);
                it = cache.emplace(A, std::make_pair(std::move(s), std::move(table))).first;
            }
            const auto& [s, table] = it->second;
            auto index = [&] {
                return static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(s.size()) - 1));
            };
            const std::size_t i1 = index(), i2 = index(), i3 = index();
            const Rigid z1 = shuffle_units(rng, R, materialize(M, s, i1));
            const Rigid z2 = shuffle_units(rng, R, materialize(M, s, i2));
            const Rigid z3 = shuffle_units(rng, R, materialize(M, s, i3));
            const Rigid z1b = shuffle_units(rng, R, materialize(M, s, i1));
            const Rigid x = random_factorization(rng, R, short_atoms);
            const Rigid w = random_factorization(rng, R, short_atoms);

            const int d12 = rigid_distance(M, z1, z2);
            const int d21 = rigid_distance(M, z2, z1);
            const int d13 = rigid_distance(M, z1, z3);
            const int d23 = rigid_distance(M, z2, z3);
            const int d11 = rigid_distance(M, z1, z1b);
            const int prefixed = rigid_distance(M, concatenate(x, z1), concatenate(x, z2));
            const int suffixed = rigid_distance(M, concatenate(z1, w), concatenate(z2, w));
            const int l1 = static_cast<int>(z1.length()), l2 = static_cast<int>(z2.length());

            std::string broken;
            if (d11 != 0) broken = "reflexivity";
            else if (d12 != d21) broken = "symmetry";
            else if (d13 > d12 + d23) broken = "triangle";
            else if (prefixed != d12 || suffixed != d12) broken = "translation";
            else if (std::abs(l1 - l2) > d12 || d12 > std::max({l1, l2, 1})) broken = "length sandwich";
            else if (d12 != table.distance(i1, i2) || (d12 == 0) != (i1 == i2)) broken = "table consistency";
            ++t.instances;
            if (!broken.empty()) {
                json j = t.context;
                j["axiom"] = broken;
                j["indices"] = {i1, i2, i3};
                j["distances"] = {{"d12", d12}, {"d21", d21}, {"d13", d13}, {"d23", d23},
                                  {"d11", d11}, {"prefixed", prefixed}, {"suffixed", suffixed}};
                t.fail(j);
                return;
            }
        }
    }
}

/// Kernel generators of the congruences that make V^{-1} U X integral, for
/// X = [[x1, p^n x2], [x3, x4]]; conditions are taken mod p^{e+n}, e = v(nr V).
std::vector<ZVec> common_multiplier_generators(const EichlerOrder& R, const Mat2& U, const Mat2& V,
                                               ChainRing& ring_out) {
    const Dvr& dvr = R.dvr();
    const int n = R.level();
    const int e = norm_val(R, V);
    ChainRing ring(R.prime(), e + n);
    const Mat2 G = V.adj() * U;
    const std::int64_t N = ring.modulus();
    const std::int64_t g11 = dvr.residue_mod(G.a, N), g12 = dvr.residue_mod(G.b_raw, N);
    const std::int64_t g21 = dvr.residue_mod(G.c, N), g22 = dvr.residue_mod(G.d, N);
    const std::int64_t pn = ring.pow_p(n);
    auto r = [&](std::int64_t x, std::int64_t y) { return ring.mul(x, y); };
    std::vector<ZVec> rows{
        {r(pn, g11), 0, r(pn, g12), 0},         // (GX)_11 = 0 mod p^e
        {0, r(pn, g11), 0, g12},                // (GX)_12 = 0 mod p^{e+n}
        {r(pn, g21), 0, r(pn, g22), 0},         // (GX)_21 = 0 mod p^e
        {0, r(r(pn, pn), g21), 0, r(pn, g22)},  // (GX)_22 = 0 mod p^e
    };
    ring_out = ring;
    return kernel(ring, rows, 4);
}

void check_intersection(const VerifyConfig& cfg, Tally& t) {
    for (auto [p, n] : eichler_levels()) {
        EichlerOrder R(Dvr(p), n);
        auto M = make_monoid(cfg, R, 3);
        Rng rng(seed_for(cfg, 12, p, n));
        const auto& atoms = M.table().atoms();
        std::vector<std::size_t> type_one;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i].tag.cls == AtomClass::I_upper || atoms[i].tag.cls == AtomClass::I_lower)
                type_one.push_back(i);
        std::vector<std::size_t> all(atoms.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

        const int pairs = sample_count(cfg, 50);
        for (int pair = 0; pair < pairs; ++pair) {
            const auto& from = rng.chance(1, 2) ? type_one : all;
            const std::size_t iu = rng.pick(from);
            std::size_t iv = rng.pick(from);
            while (iv == iu) iv = rng.pick(from);
            const Mat2& U = atoms[iu].matrix;
            const Mat2& V = atoms[iv].matrix;
            json ctx = where(R);
            ctx["U"] = io::to_json(U);
            ctx["V"] = io::to_json(V);
            t.context = ctx;
            if (R.right_associated(U, V) || R.right_associated(V, U)) {
                ctx["reason"] = "distinct canonical atoms are right associated";
                t.fail(ctx);
                return;
            }
            ChainRing ring(p, 1);
            const auto gens = common_multiplier_generators(R, U, V, ring);
            const std::int64_t N = ring.modulus();
            const Rational pn = R.dvr().pi_power(n);
            for (int multiple = 0; multiple < 20; ++multiple) {
                Mat2 W;
                for (int attempt = 0;; ++attempt) {
                    if (attempt == 100) throw std::logic_error("no cancellative common multiple found");
                    std::array<std::int64_t, 4> x{};
                    for (const auto& g : gens) {
                        const auto coef = rng.uniform(0, N - 1);
                        for (int k = 0; k < 4; ++k) x[k] = ring.reduce(x[k] + ring.mul(coef, g[k]));
                    }
                    for (auto& xi : x) xi += N * rng.uniform(-2, 2);
                    const Mat2 X{Rational(x[0]), pn * Rational(x[1]), Rational(x[2]), Rational(x[3])};
                    W = U * X;
                    if (rng.chance(1, 2)) W = W * random_eichler_unit(rng, R);
                    if (!W.det().is_zero()) break;
                }
                ++t.instances;
                json j = ctx;
                j["W"] = io::to_json(W);
                if (!R.contains(left_divide(V, W)) || !R.contains(left_divide(U, W))) {
                    j["reason"] = "constructed element is not a common right multiple";
                    t.fail(j);
                    return;
                }
                if (!R.in_jacobson(W)) {
                    j["reason"] = "common right multiple outside J(R)";
                    t.fail(j);
                    return;
                }
            }
        }
    }
}

// ---- checks 9-11: even Clifford algebras ------------------------------------

template <class S>
std::string broken_identity(const C0Algebra<S>& A, const C0Element<S>& x, const C0Element<S>& y,
                            const C0Element<S>& z) {
    const auto xy = A.multiply(x, y);
    if (A.multiply(xy, z) != A.multiply(x, A.multiply(y, z))) return "associativity";
    if (A.conj(xy) != A.multiply(A.conj(y), A.conj(x))) return "conjugation anti-automorphism";
    if (A.conj(A.conj(x)) != x) return "conjugation involution";
    if (A.nr(xy) != A.nr(x) * A.nr(y)) return "norm multiplicativity";
    const auto charpoly = A.add(A.sub(A.multiply(x, x), A.scale(A.tr(x), x)), A.scale(A.nr(x), A.one()));
    if (charpoly != A.zero()) return "characteristic polynomial";
    if (A.multiply(x, A.conj(x)) != A.scale(A.nr(x), A.one())) return "x conj(x) = nr(x)";
    return {};
}

json element_json(const C0Element<ModInt>& x) {
    json j = json::array();
    for (const auto& c : x.x) j.push_back(c.v);
    return j;
}

json element_json(const C0Element<Rational>& x) { return io::to_json(x); }

json form_json(const TernaryForm<ModInt>& q) {
    return {q.a.v, q.b.v, q.c.v, q.u.v, q.v.v, q.w.v};
}

json form_json(const Form& q) { return io::to_json(q); }

void check_clifford_identities(const VerifyConfig& cfg, Tally& t) {
    Rng rng(seed_for(cfg, 9, 0));
    const int triples = sample_count(cfg, 1000);
    for (int f = 0; f < 10; ++f) {
        Form q;
        for (Rational* c : {&q.a, &q.b, &q.c, &q.u, &q.v, &q.w})
            *c = rng.chance(1, 5) ? Rational(0) : random_small_rational(rng, 6, 3);
        C0Algebra<Rational> A(q);
        for (int i = 0; i < triples; ++i) {
            const auto x = random_c0_rational(rng), y = random_c0_rational(rng), z = random_c0_rational(rng);
            ++t.instances;
            if (auto what = broken_identity(A, x, y, z); !what.empty()) {
                t.fail({{"field", "Q"}, {"form", form_json(q)}, {"identity", what},
                        {"x", element_json(x)}, {"y", element_json(y)}, {"z", element_json(z)}});
                return;
            }
        }
        for (long p : {2L, 3L, 5L}) {
            TernaryForm<ModInt> qp;
            for (ModInt* c : {&qp.a, &qp.b, &qp.c, &qp.u, &qp.v, &qp.w}) *c = ModInt(rng.uniform(0, p - 1), p);
            C0Algebra<ModInt> Ap(qp);
            for (int i = 0; i < triples; ++i) {
                const auto x = random_c0_mod(rng, p), y = random_c0_mod(rng, p), z = random_c0_mod(rng, p);
                ++t.instances;
                if (auto what = broken_identity(Ap, x, y, z); !what.empty()) {
                    t.fail({{"field", "F_" + std::to_string(p)}, {"form", form_json(qp)}, {"identity", what},
                            {"x", element_json(x)}, {"y", element_json(y)}, {"z", element_json(z)}});
                    return;
                }
            }
        }
    }
}

bool is_square_mod(std::int64_t x, long p) {
    x = ((x % p) + p) % p;
    for (std::int64_t y = 0; y < p; ++y)
        if (y * y % p == x) return true;
    return false;
}

/// Residues (a, b, c, u) of one normalized residue shape; v = w = 0.
struct Shape {
    std::string label;     ///< expected case label
    std::string name;      ///< distinguishes sub-shapes in reports
    std::function<std::array<std::int64_t, 4>(Rng&)> residues;
};

std::vector<Shape> residue_shapes(long p) {
    auto unit = [p](Rng& rng) { return rng.uniform(1, p - 1); };
    std::vector<Shape> shapes;
    if (p != 2) {
        shapes.push_back({"1a", "1a", [=](Rng& r) { return std::array<std::int64_t, 4>{unit(r), unit(r), unit(r), 0}; }});
        shapes.push_back({"2a", "2a split", [=](Rng& r) {
                              for (;;) {
                                  auto a = unit(r), b = unit(r);
                                  if (is_square_mod(-a * b, p)) return std::array<std::int64_t, 4>{a, b, 0, 0};
                              }
                          }});
        shapes.push_back({"2a", "2a field", [=](Rng& r) {
                              for (;;) {
                                  auto a = unit(r), b = unit(r);
                                  if (!is_square_mod(-a * b, p)) return std::array<std::int64_t, 4>{a, b, 0, 0};
                              }
                          }});
    } else {
        shapes.push_back({"1b-i", "1b-i", [](Rng&) { return std::array<std::int64_t, 4>{1, 1, 1, 0}; }});
        shapes.push_back({"2b-i", "2b-i", [](Rng&) { return std::array<std::int64_t, 4>{1, 1, 0, 0}; }});
        shapes.push_back({"4", "4", [](Rng& r) {
                              return std::array<std::int64_t, 4>{1, r.uniform(0, 1), r.uniform(0, 1), 1};
                          }});
        shapes.push_back({"5", "5 split", [](Rng& r) {
                              for (;;) {
                                  auto b = r.uniform(0, 1), c = r.uniform(0, 1);
                                  if (b * c == 0) return std::array<std::int64_t, 4>{0, b, c, 1};
                              }
                          }});
        shapes.push_back({"5", "5 field", [](Rng&) { return std::array<std::int64_t, 4>{0, 1, 1, 1}; }});
    }
    shapes.push_back({"3", "3", [=](Rng& r) { return std::array<std::int64_t, 4>{unit(r), 0, 0, 0}; }});
    shapes.push_back({"3", "3 zero", [](Rng&) { return std::array<std::int64_t, 4>{0, 0, 0, 0}; }});
    return shapes;
}

/// Integral form with the given residues and random multiples of p added,
/// nondegenerate over Q.
Form lift_form(Rng& rng, long p, const std::array<std::int64_t, 4>& r) {
    for (;;) {
        auto lift = [&](std::int64_t x) {
            std::int64_t m = rng.uniform(-3, 3);
            if (x == 0 && m == 0) m = 1;
            return Rational(x + p * m);
        };
        Form q{lift(r[0]), lift(r[1]), lift(r[2]), Rational(r[3] + p * rng.uniform(-2, 2)),
               Rational(p * rng.uniform(-2, 2)), Rational(p * rng.uniform(-2, 2))};
        if (!half_discriminant(q).is_zero()) return q;
    }
}

Submodule span_fp(long p, const std::vector<FpVec>& vs) {
    std::vector<ZVec> rows;
    for (const auto& v : vs) rows.emplace_back(v.begin(), v.end());
    return Submodule::span(ChainRing(p, 1), 4, rows);
}

bool dimension_ok(int d) { return d == 1 || d == 2 || d == 4; }

void check_radical_table(const VerifyConfig& cfg, Tally& t) {
    for (long p : {2L, 3L, 5L}) {
        Rng rng(seed_for(cfg, 10, p));
        const Dvr dvr(p);
        for (const auto& shape : residue_shapes(p)) {
            for (int i = 0; i < sample_count(cfg, 5); ++i) {
                const Form q = lift_form(rng, p, shape.residues(rng));
                const auto qbar = reduce_form(q, dvr);
                json ctx{{"p", p}, {"shape", shape.name}, {"form", form_json(q)}};
                t.context = ctx;
                const auto predicted = classify_residue(qbar);
                const auto brute = residue_radical(qbar);
                const auto preds = order_predicates(q, dvr);
                ++t.instances;
                std::string broken;
                if (predicted.case_label != shape.label) broken = "case label";
                else if (span_fp(p, predicted.radical) != brute.power(1)) broken = "J";
                else if (span_fp(p, predicted.radical_square) != brute.power(2)) broken = "J^2";
                else if (span_fp(p, predicted.radical_cube) != brute.power(3)) broken = "J^3";
                else if (predicted.quotient != brute.quotient) broken = "quotient type";
                else if (!dimension_ok(brute.quotient_dimension()) || !dimension_ok(preds.residue_dimension))
                    broken = "quotient dimension";
                if (!broken.empty()) {
                    ctx["mismatch"] = broken;
                    ctx["predicted"] = io::to_json(predicted);
                    ctx["brute_force"] = {{"J", io::to_json(brute.power(1))},
                                          {"J2", io::to_json(brute.power(2))},
                                          {"J3", io::to_json(brute.power(3))},
                                          {"quotient", to_string(brute.quotient)}};
                    t.fail(ctx);
                    return;
                }
            }
        }
        // Arbitrary nondegenerate forms, normalized or not.
        for (int i = 0; i < 4 * sample_count(cfg, 5); ++i) {
            Form q;
            do {
                for (Rational* c : {&q.a, &q.b, &q.c, &q.u, &q.v, &q.w}) *c = Rational(rng.uniform(-6, 6));
            } while (half_discriminant(q).is_zero());
            t.context = {{"p", p}, {"form", form_json(q)}};
            const auto brute = residue_radical(reduce_form(q, dvr));
            ++t.instances;
            if (!dimension_ok(brute.quotient_dimension())) {
                json j = t.context;
                j["quotient_dimension"] = brute.quotient_dimension();
                t.fail(j);
                return;
            }
        }
    }
}

/// Nondegenerate diagonal forms with a rational zero whose orders are local.
Form local_isotropic_form(Rng& rng, long p) {
    for (;;) {
        std::int64_t a = 0, b = 0, c = 0;
        if (p == 2) {
            a = 2 * rng.uniform(-3, 3) + 1;
            b = 2 * rng.uniform(-3, 3) + 1;
            const auto x = rng.uniform(0, 3), y = rng.uniform(0, 3);
            c = -(a * x * x + b * y * y); // q(x, y, 1) = 0
        } else if (rng.chance(1, 2)) {
            // a = b mod p units, so that -ab is a non-square mod 3
            do a = rng.uniform(-8, 8); while (a % p == 0);
            b = a + p * rng.uniform(-2, 2);
            const auto x = p * rng.uniform(0, 2), y = p * rng.uniform(0, 2);
            c = -(a * x * x + b * y * y);
        } else {
            // residue form a x^2 with q(p x, y, 1) = 0
            do a = rng.uniform(-4, 4); while (a % p == 0);
            const auto b1 = rng.uniform(-3, 3), x = rng.uniform(0, 2), y = rng.uniform(0, 2);
            b = p * b1;
            c = -p * (p * a * x * x + b1 * y * y);
        }
        if (a == 0 || b == 0 || c == 0) continue;
        return Form{Rational(a), Rational(b), Rational(c), 0, 0, 0};
    }
}

void check_nilpotent_long_atoms(const VerifyConfig& cfg, Tally& t) {
    std::size_t trace_zero = 0;
    for (long p : {2L, 3L}) {
        Rng rng(seed_for(cfg, 11, p));
        const Dvr dvr(p);
        for (int f = 0; f < sample_count(cfg, 6); ++f) {
            const Form q = local_isotropic_form(rng, p);
            json ctx{{"p", p}, {"form", form_json(q)}};
            t.context = ctx;
            const CliffordOrder R(q, dvr);
            ++t.instances;
            if (!R.is_local()) {
                ctx["reason"] = "order is not local";
                t.fail(ctx);
                return;
            }
            const auto& A = R.algebra();
            const auto z = R.find_nilpotent_in_radical();
            ctx["z"] = element_json(z);
            t.context = ctx;
            if (!A.nr(z).is_zero() || !R.in_radical(z) || R.in_radical_square(z)) {
                ctx["reason"] = "z is not a norm-zero element of J \\ J^2";
                t.fail(ctx);
                return;
            }
            const Rational tr = A.tr(z);
            if (tr.is_zero()) ++trace_zero;
            for (int k = 2; k <= 5; ++k) {
                const auto x = R.long_atom_family(z, k);
                const Rational pk = dvr.pi_power(k);
                const Rational nr = A.nr(x);
                ++t.instances;
                const bool norm_ok = nr == pk * pk + pk * tr &&
                                     (!tr.is_zero() || dvr.valuation(nr) == Valuation(2 * k));
                const auto status = R.is_atom_local(x);
                if (status != AtomStatus::Atom || !norm_ok) {
                    ctx["k"] = k;
                    ctx["status"] = to_string(status);
                    ctx["norm"] = io::to_json(nr);
                    t.fail(ctx);
                    return;
                }
            }
        }
    }
    if (trace_zero == 0) t.fail({{"reason", "no sampled form produced a trace-zero nilpotent"}});
}

using CheckFn = void (*)(const VerifyConfig&, Tally&);

struct CheckInfo {
    const char* name;
    const char* anchor;
    CheckFn fn;
};

const CheckInfo kChecks[kCheckCount] = {
    {"min-delta-witness", "L([[p, p^n], [p, p^2 + p^n]]) = {2, 3}", check_min_delta},
    {"unique-factorization-off-radical", "A not in J(R): |Z*(A)| = 1 and L(A) = {v(nr A)}",
     check_unique_off_radical},
    {"atom-classification", "valuation atom criterion agrees with exhaustive left-divisor search",
     check_atom_classification},
    {"canonical-associates", "every atom is right associated to exactly one canonical atom",
     check_canonical_associates},
    {"radical-min-length", "A in J(R): min L(A) <= n + 5", check_radical_min_length},
    {"catenary-and-delta", "c(A) <= n + 6 and max Delta(L(A)) <= n + 4", check_catenary_delta},
    {"unbounded-elasticity", "L(p^m) contains {2, 2m}, so rho_2 >= m", check_unbounded_elasticity},
    {"distance-axioms",
     "rigid distance is reflexive, symmetric, subadditive, translation invariant and length bounded",
     check_distance_axioms},
    {"clifford-identities",
     "C0 is associative, conj is an anti-involution, nr is multiplicative, x^2 - tr(x) x + nr(x) = 0",
     check_clifford_identities},
    {"radical-case-table", "predicted J, J^2, J^3 and A/J match brute force; dim A/J in {1, 2, 4}",
     check_radical_table},
    {"nilpotent-long-atoms", "local split orders: nr(z) = 0 for z in J \\ J^2 and p^k + z are atoms of norm p^2k",
     check_nilpotent_long_atoms},
    {"intersection-in-radical", "UR and VR meet inside J(R) for non-associated atoms U, V", check_intersection},
};

} // namespace

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
    json j;
    j["seed"] = seed;
    j["pass"] = all_pass();
    j["checks"] = json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"id", c.id},
                               {"name", c.name},
                               {"anchor", c.anchor},
                               {"instances", c.instances},
                               {"pass", c.pass},
                               {"counterexample", c.counterexample}});
    return j;
}

std::pair<std::string, std::string> check_description(int id) {
    if (id < 1 || id > kCheckCount) throw DomainError("unknown check id " + std::to_string(id));
    return {kChecks[id - 1].name, kChecks[id - 1].anchor};
}

CheckResult run_check(int id, const VerifyConfig& config) {
    auto [name, anchor] = check_description(id);
    CheckResult r{id, name, anchor, 0, false, nullptr, 0};
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    try {
        kChecks[id - 1].fn(config, t);
    } catch (const std::exception& e) {
        json j = t.context.is_null() ? json::object() : t.context;
        j["error"] = e.what();
        t.fail(j);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.instances = t.instances;
    r.pass = t.ok();
    r.counterexample = std::move(t.counterexample);
    return r;
}

VerificationReport run_verification(const VerifyConfig& config) {
    std::vector<int> ids = config.checks;
    if (ids.empty())
        for (int i = 1; i <= kCheckCount; ++i) ids.push_back(i);
    for (int id : ids) check_description(id);

    VerificationReport report;
    report.seed = config.seed;
    report.checks.resize(ids.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < ids.size();) report.checks[i] = run_check(ids[i], config);
    };
    const int threads = std::clamp(config.threads, 1, static_cast<int>(ids.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return report;
}

} // namespace qfact
