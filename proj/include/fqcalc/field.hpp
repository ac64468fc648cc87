#ifndef FQCALC_FIELD_HPP
#define FQCALC_FIELD_HPP

// Exact arithmetic in the constant field F_{q^s}, built as the tower
// F_p[u]/(modulus_q) = F_q, then F_q[w]/(modulus_s) = F_{q^s}.
// Elements are flat F_p digit vectors relative to the basis u^a w^b,
// flat index a + v*b.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace fqcalc {

using Int = mpz_class;
using Rat = mpq_class;

namespace detail {

inline bool is_prime_small(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense polynomial helpers over an abstract field K. K supplies:
//   using Elem;  zero(), one(), is_zero(e), eq(a,b), add, sub, mul, inv, neg,
//   card() -> Int (field size), enumerate(i) -> i-th element (i < card, small fields only).
// Vectors are coefficient lists, constant term first, not necessarily trimmed.
template <class K>
struct PolyOps {
    using E = typename K::Elem;
    using V = std::vector<E>;

    static void trim(const K& k, V& a) {
        while (!a.empty() && k.is_zero(a.back())) a.pop_back();
    }
    static int deg(const V& a) { return static_cast<int>(a.size()) - 1; } // -1 == zero
    static bool is_zero(const V& a) { return a.empty(); }

    static V add(const K& k, const V& a, const V& b) {
        V r(std::max(a.size(), b.size()), k.zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
        trim(k, r);
        return r;
    }
    static V sub(const K& k, const V& a, const V& b) {
        V r(std::max(a.size(), b.size()), k.zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
        trim(k, r);
        return r;
    }
    static V mul(const K& k, const V& a, const V& b) {
        if (a.empty() || b.empty()) return {};
        V r(a.size() + b.size() - 1, k.zero());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
        trim(k, r);
        return r;
    }
    static V scalar_mul(const K& k, const E& c, V a) {
        for (auto& x : a) x = k.mul(c, x);
        trim(k, a);
        return a;
    }

    // a mod m; m must be nonzero.
    static V mod(const K& k, V a, const V& m) {
        trim(k, a);
        const int dm = deg(m);
        if (dm < 0) throw DivisionByZero{};
        const E lead_inv = k.inv(m.back());
        while (deg(a) >= dm) {
            const E c = k.mul(a.back(), lead_inv);
            const int shift = deg(a) - dm;
            for (int i = 0; i <= dm; ++i)
                a[i + shift] = k.sub(a[i + shift], k.mul(c, m[i]));
            trim(k, a);
        }
        return a;
    }

    static V mulmod(const K& k, const V& a, const V& b, const V& m) {
        return mod(k, mul(k, a, b), m);
    }

    // x^e mod m for a (possibly huge) nonnegative exponent.
    static V pow_x_mod(const K& k, Int e, const V& m) {
        V base = {k.zero(), k.one()}; // x
        base = mod(k, base, m);
        V acc = {k.one()};
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mulmod(k, acc, base, m);
            base = mulmod(k, base, base, m);
            e >>= 1;
        }
        return acc;
    }

    static V gcd(const K& k, V a, V b) {
        trim(k, a);
        trim(k, b);
        while (!b.empty()) {
            V r = mod(k, a, b);
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.empty()) a = scalar_mul(k, k.inv(a.back()), a); // monic
        return a;
    }

    // Extended Euclid: returns g (monic) and s with s*a == g (mod m).
    // Used with gcd(a, m) == 1 to invert a modulo m.
    static std::pair<V, V> inv_mod(const K& k, V a, const V& m) {
        V r0 = m, r1 = mod(k, std::move(a), m);
        V s0 = {}, s1 = {k.one()};
        while (!r1.empty()) {
            const int d0 = deg(r0), d1 = deg(r1);
            if (d0 < d1) {
                std::swap(r0, r1);
                std::swap(s0, s1);
                continue;
            }
            // One long-division step folded into the loop.
            const E c = k.mul(r0.back(), k.inv(r1.back()));
            const int shift = d0 - d1;
            V t(shift + 1, k.zero());
            t[shift] = c;
            r0 = sub(k, r0, mul(k, t, r1));
            s0 = sub(k, s0, mul(k, t, s1));
            std::swap(r0, r1);
            std::swap(s0, s1);
        }
        // r0 == gcd, s0*orig_a == r0 (mod m)
        if (deg(r0) != 0) throw NotInvertible{"element shares a factor with the modulus"};
        const E norm = k.inv(r0[0]);
        return {scalar_mul(k, norm, r0), scalar_mul(k, norm, s0)};
    }

    // Rabin's irreducibility test for monic f of degree n >= 1 over a field
    // with Q elements: f is irreducible iff x^(Q^n) == x (mod f) and
    // gcd(x^(Q^(n/r)) - x, f) == 1 for every prime r | n.
    static bool is_irreducible(const K& k, const V& f) {
        const Int Q = k.card();
        const int n = deg(f);
        if (n < 1) return false;
        const V x = {k.zero(), k.one()};
        Int qn;
        mpz_pow_ui(qn.get_mpz_t(), Q.get_mpz_t(), static_cast<unsigned long>(n));
        V h = pow_x_mod(k, qn, f);
        if (sub(k, h, mod(k, x, f)) != V{}) return false;
        for (int r = 2; r <= n; ++r) {
            if (n % r != 0 || !is_prime_small(r)) continue;
            Int e;
            mpz_pow_ui(e.get_mpz_t(), Q.get_mpz_t(), static_cast<unsigned long>(n / r));
            V g = sub(k, pow_x_mod(k, e, f), mod(k, x, f));
            if (deg(gcd(k, std::move(g), f)) != 0) return false;
        }
        return true;
    }
};

// The prime field F_p with int elements in [0, p).
struct FpField {
    using Elem = int;
    long p;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem add(Elem a, Elem b) const { return static_cast<int>((a + long{b}) % p); }
    Elem sub(Elem a, Elem b) const { return static_cast<int>(((a - long{b}) % p + p) % p); }
    Elem neg(Elem a) const { return a == 0 ? 0 : static_cast<int>(p - a); }
    Elem mul(Elem a, Elem b) const { return static_cast<int>((long{a} * b) % p); }
    Elem inv(Elem a) const {
        if (a == 0) throw DivisionByZero{};
        // Fermat: a^(p-2)
        long r = 1, base = a, e = p - 2;
        while (e > 0) {
            if (e & 1) r = (r * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        return static_cast<int>(r);
    }
    Int card() const { return Int(p); }
    Elem enumerate(long i) const { return static_cast<int>(i); }
};

// F_q = F_p[u]/(modulus), elements as trimmed digit vectors.
struct FqField {
    using Elem = std::vector<int>;
    FpField fp;
    std::vector<int> modulus; // monic, degree v

    using P = PolyOps<FpField>;

    Elem zero() const { return {}; }
    Elem one() const { return {1}; }
    bool is_zero(const Elem& a) const { return a.empty(); }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const { return P::add(fp, a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return P::sub(fp, a, b); }
    Elem neg(const Elem& a) const { return P::sub(fp, {}, a); }
    Elem mul(const Elem& a, const Elem& b) const { return P::mod(fp, P::mul(fp, a, b), modulus); }
    Elem inv(const Elem& a) const {
        if (a.empty()) throw DivisionByZero{};
        return P::inv_mod(fp, a, modulus).second;
    }
    Int card() const {
        Int c;
        mpz_pow_ui(c.get_mpz_t(), Int(fp.p).get_mpz_t(), modulus.size() - 1);
        return c;
    }
    // i-th element by base-p digits, i < q.
    Elem enumerate(long i) const {
        Elem e;
        while (i > 0) {
            e.push_back(static_cast<int>(i % fp.p));
            i /= fp.p;
        }
        return e;
    }
};

} // namespace detail

struct FieldDesc;
using FieldPtr = std::shared_ptr<const FieldDesc>;

// Flat element of F_{q^s}: F_p digits, index a + v*b for basis u^a w^b.
// Plain value type; all arithmetic goes through FieldDesc.
class FFElem {
public:
    static constexpr int kMaxDigits = 16;

    FFElem() : d_{} {}

    int digit(int i) const { return d_[static_cast<std::size_t>(i)]; }
    void set_digit(int i, int val) { d_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(val); }

    bool is_zero() const {
        for (auto x : d_)
            if (x) return false;
        return true;
    }

    friend bool operator==(const FFElem& a, const FFElem& b) { return a.d_ == b.d_; }
    friend bool operator!=(const FFElem& a, const FFElem& b) { return a.d_ != b.d_; }
    friend bool operator<(const FFElem& a, const FFElem& b) { return a.d_ < b.d_; }

private:
    std::array<std::uint8_t, kMaxDigits> d_;
};

// Immutable description of the coefficient field plus precomputed Frobenius
// tables. Create through FieldDesc::make (validates everything once).
struct FieldDesc {
    long p = 2;
    int v = 1;
    int s = 1;
    std::vector<int> modulus_q;                   // degree v over F_p, monic
    std::vector<std::vector<int>> modulus_s;      // degree s over F_q, monic

    long q = 2;    // p^v
    Int card = 2;  // q^s

    // frob_[j] is the (vs x vs) F_p matrix of a -> a^(q^j), row-major.
    std::vector<std::vector<std::uint8_t>> frob_;

    int digits() const { return v * s; }

    static FieldPtr make(long p, int v, int s,
                         std::optional<std::vector<int>> mod_q = std::nullopt,
                         std::optional<std::vector<std::vector<int>>> mod_s = std::nullopt);

    // --- element construction ---

    FFElem zero() const { return FFElem{}; }
    FFElem one() const { return from_int(1); }
    FFElem from_int(long n) const {
        FFElem e;
        long r = ((n % p) + p) % p;
        e.set_digit(0, static_cast<int>(r));
        return e;
    }
    // Basis monomial u^a w^b by flat index.
    FFElem basis(int flat) const {
        FFElem e;
        e.set_digit(flat, 1);
        return e;
    }
    // Generator used for printing: u when v > 1, else w (trivial lower level).
    FFElem generator() const { return digits() >= 2 ? basis(1) : one(); }

    // --- arithmetic ---

    FFElem add(const FFElem& a, const FFElem& b) const {
        FFElem r;
        for (int i = 0; i < digits(); ++i)
            r.set_digit(i, static_cast<int>((a.digit(i) + long{b.digit(i)}) % p));
        return r;
    }
    FFElem neg(const FFElem& a) const {
        FFElem r;
        for (int i = 0; i < digits(); ++i)
            r.set_digit(i, a.digit(i) == 0 ? 0 : static_cast<int>(p - a.digit(i)));
        return r;
    }
    FFElem sub(const FFElem& a, const FFElem& b) const { return add(a, neg(b)); }

    FFElem mul(const FFElem& a, const FFElem& b) const {
        // Schoolbook in the tower: s-degree convolution over F_q, then reduce
        // by modulus_s; each F_q product reduces by modulus_q.
        const auto av = unflatten(a), bv = unflatten(b);
        std::vector<std::vector<int>> prod(static_cast<std::size_t>(2 * s - 1));
        detail::FqField fq = fq_ops();
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                prod[static_cast<std::size_t>(i + j)] =
                    fq.add(prod[static_cast<std::size_t>(i + j)], fq.mul(av[static_cast<std::size_t>(i)], bv[static_cast<std::size_t>(j)]));
        reduce_mod_s(fq, prod);
        return flatten(prod);
    }

    FFElem inv(const FFElem& a) const {
        if (a.is_zero()) throw DivisionByZero{};
        detail::FqField fq = fq_ops();
        using PS = detail::PolyOps<detail::FqField>;
        auto av = unflatten(a);
        PS::trim(fq, av);
        auto [g, inv] = PS::inv_mod(fq, av, modulus_s);
        (void)g;
        inv.resize(static_cast<std::size_t>(s));
        return flatten(inv);
    }

    FFElem pow(FFElem a, Int e) const {
        if (e < 0) {
            a = inv(a);
            e = -e;
        }
        FFElem acc = one();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    // a^(q^k) for any integer k; uses a^(q^s) == a, so k is taken mod s.
    FFElem frobenius(const FFElem& a, long k) const {
        int j = static_cast<int>(((k % s) + s) % s);
        if (j == 0) return a;
        const auto& m = frob_[static_cast<std::size_t>(j)];
        const int n = digits();
        FFElem r;
        for (int row = 0; row < n; ++row) {
            long acc = 0;
            for (int col = 0; col < n; ++col)
                acc += long{m[static_cast<std::size_t>(row * n + col)]} * a.digit(col);
            r.set_digit(row, static_cast<int>(acc % p));
        }
        return r;
    }

    // True iff a lies in the subfield F_q (fixed by the q-power Frobenius).
    bool in_base_fq(const FFElem& a) const { return frobenius(a, 1) == a; }

    bool same_as(const FieldDesc& o) const {
        return p == o.p && v == o.v && s == o.s && modulus_q == o.modulus_q && modulus_s == o.modulus_s;
    }

    detail::FqField fq_ops() const { return detail::FqField{detail::FpField{p}, modulus_q}; }

    // Lexicographically smallest monic irreducible of the given degree over
    // F_p (coefficients enumerated low-to-high as base-p digits).
    static std::vector<int> default_modulus_q(long p, int deg);
    // Same over F_q (elements ordered by their digit value).
    static std::vector<std::vector<int>> default_modulus_s(long p, const std::vector<int>& mod_q, int deg);

private:
    std::vector<std::vector<int>> unflatten(const FFElem& a) const {
        std::vector<std::vector<int>> r(static_cast<std::size_t>(s));
        for (int b = 0; b < s; ++b) {
            std::vector<int> c(static_cast<std::size_t>(v));
            for (int a_i = 0; a_i < v; ++a_i) c[static_cast<std::size_t>(a_i)] = a.digit(a_i + v * b);
            while (!c.empty() && c.back() == 0) c.pop_back();
            r[static_cast<std::size_t>(b)] = std::move(c);
        }
        return r;
    }
    FFElem flatten(const std::vector<std::vector<int>>& coords) const {
        FFElem e;
        for (int b = 0; b < s && b < static_cast<int>(coords.size()); ++b)
            for (int a_i = 0; a_i < static_cast<int>(coords[static_cast<std::size_t>(b)].size()); ++a_i)
                e.set_digit(a_i + v * b, coords[static_cast<std::size_t>(b)][static_cast<std::size_t>(a_i)]);
        return e;
    }
    void reduce_mod_s(const detail::FqField& fq, std::vector<std::vector<int>>& poly) const {
        using PS = detail::PolyOps<detail::FqField>;
        std::vector<std::vector<int>> tmp = std::move(poly);
        PS::trim(fq, tmp);
        tmp = PS::mod(fq, std::move(tmp), modulus_s);
        tmp.resize(static_cast<std::size_t>(s));
        poly = std::move(tmp);
    }
};

inline std::vector<int> FieldDesc::default_modulus_q(long p, int deg) {
    detail::FpField fp{p};
    using P = detail::PolyOps<detail::FpField>;
    Int total;
    mpz_pow_ui(total.get_mpz_t(), Int(p).get_mpz_t(), static_cast<unsigned long>(deg));
    for (Int i = 0; i < total; ++i) {
        std::vector<int> f(static_cast<std::size_t>(deg) + 1, 0);
        Int rest = i;
        for (int k = 0; k < deg; ++k) {
            f[static_cast<std::size_t>(k)] = static_cast<int>(mpz_fdiv_ui(rest.get_mpz_t(), static_cast<unsigned long>(p)));
            rest /= p;
        }
        f[static_cast<std::size_t>(deg)] = 1;
        if (deg == 1 || P::is_irreducible(fp, f)) return f;
    }
    throw ConfigError("no irreducible modulus found"); // unreachable
}

inline std::vector<std::vector<int>> FieldDesc::default_modulus_s(long p, const std::vector<int>& mod_q, int deg) {
    detail::FqField fq{detail::FpField{p}, mod_q};
    using P = detail::PolyOps<detail::FqField>;
    const long qq = [&] {
        long r = 1;
        for (std::size_t i = 0; i + 1 < mod_q.size(); ++i) r *= p;
        return r;
    }();
    Int total;
    mpz_pow_ui(total.get_mpz_t(), Int(qq).get_mpz_t(), static_cast<unsigned long>(deg));
    for (Int i = 0; i < total; ++i) {
        std::vector<std::vector<int>> f(static_cast<std::size_t>(deg) + 1);
        Int rest = i;
        for (int k = 0; k < deg; ++k) {
            f[static_cast<std::size_t>(k)] = fq.enumerate(static_cast<long>(mpz_fdiv_ui(rest.get_mpz_t(), static_cast<unsigned long>(qq))));
            rest /= qq;
        }
        f[static_cast<std::size_t>(deg)] = fq.one();
        if (deg == 1 || P::is_irreducible(fq, f)) return f;
    }
    throw ConfigError("no irreducible modulus found"); // unreachable
}

inline FieldPtr FieldDesc::make(long p, int v, int s,
                                std::optional<std::vector<int>> mod_q,
                                std::optional<std::vector<std::vector<int>>> mod_s) {
    if (!detail::is_prime_small(p)) throw ConfigError("p must be prime, got " + std::to_string(p));
    if (v < 1 || s < 1) throw ConfigError("extension degrees must be >= 1");
    if (v * s > FFElem::kMaxDigits) throw ConfigError("v*s exceeds the supported digit budget (16)");
    if (p > 251) throw ConfigError("p must fit one byte per digit (p <= 251)");
    double bits = static_cast<double>(v) * std::log2(static_cast<double>(p));
    if (bits > 40) throw ConfigError("q = p^v too large");

    auto fd = std::make_shared<FieldDesc>();
    fd->p = p;
    fd->v = v;
    fd->s = s;
    fd->q = 1;
    for (int i = 0; i < v; ++i) fd->q *= p;
    mpz_pow_ui(fd->card.get_mpz_t(), Int(fd->q).get_mpz_t(), static_cast<unsigned long>(s));

    fd->modulus_q = mod_q ? *mod_q : default_modulus_q(p, v);
    {
        detail::FpField fp{p};
        using P = detail::PolyOps<detail::FpField>;
        auto m = fd->modulus_q;
        P::trim(fp, m);
        if (P::deg(m) != v) throw ConfigError("modulus_q must have degree v");
        for (auto& c : m) c = ((c % static_cast<int>(p)) + static_cast<int>(p)) % static_cast<int>(p);
        if (m.back() != 1) throw ConfigError("modulus_q must be monic");
        if (v > 1 && !P::is_irreducible(fp, m)) throw ConfigError("modulus_q is reducible");
        fd->modulus_q = m;
    }

    fd->modulus_s = mod_s ? *mod_s : default_modulus_s(p, fd->modulus_q, s);
    {
        detail::FqField fq = fd->fq_ops();
        using P = detail::PolyOps<detail::FqField>;
        auto m = fd->modulus_s;
        P::trim(fq, m);
        if (P::deg(m) != s) throw ConfigError("modulus_s must have degree s");
        if (!fq.eq(m.back(), fq.one())) throw ConfigError("modulus_s must be monic");
        for (auto& c : m)
            if (static_cast<int>(c.size()) > v) throw ConfigError("modulus_s coefficient out of F_q");
        if (s > 1 && !P::is_irreducible(fq, m)) throw ConfigError("modulus_s is reducible");
        fd->modulus_s = m;
    }

    // Frobenius tables: columns are images of basis elements under a -> a^(q^j).
    const int n = fd->digits();
    fd->frob_.assign(static_cast<std::size_t>(s), std::vector<std::uint8_t>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0));
    for (int j = 1; j < s; ++j) {
        Int e;
        mpz_pow_ui(e.get_mpz_t(), Int(fd->q).get_mpz_t(), static_cast<unsigned long>(j));
        for (int k = 0; k < n; ++k) {
            FFElem img = fd->pow(fd->basis(k), e);
            for (int row = 0; row < n; ++row)
                fd->frob_[static_cast<std::size_t>(j)][static_cast<std::size_t>(row * n + k)] =
                    static_cast<std::uint8_t>(img.digit(row));
        }
    }
    return fd;
}

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a.get() == b.get()) return;
    if (!a || !b || !a->same_as(*b)) throw ConfigError("mixed field descriptors");
}

} // namespace fqcalc

#endif
