#include "field.hpp"

#include <bit>
#include <cstring>

#include <openssl/evp.h>

#include "error.hpp"

namespace ffv {

u64 pow_mod(u64 a, u64 e, u64 q) {
    u64 r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) r = mul_mod(r, a, q);
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 q) {
    a %= q;
    if (a == 0) fail(errc::bad_argument, "inverse of zero");
    return pow_mod(a, q - 2, q); // q prime
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic witness set for 64-bit integers
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 next_prime_at_least(u64 n) {
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime(n)) n += 2;
    return n;
}

u64 poly_eval(const FieldPoly& p, u64 x) {
    u64 acc = 0;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
        acc = add_mod(mul_mod(acc, x, p.q), *it % p.q, p.q);
    return acc;
}

// ---- dense polynomial helpers (low degree first, trimmed; empty == 0) ----
namespace {

using poly = std::vector<u64>;

void trim(poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const poly& p) { return (int)p.size() - 1; }

u64 eval_raw(const poly& p, u64 x, u64 q) {
    u64 acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = add_mod(mul_mod(acc, x, q), *it, q);
    return acc;
}

poly mul(const poly& a, const poly& b, u64 q) {
    if (a.empty() || b.empty()) return {};
    poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = add_mod(r[i + j], mul_mod(a[i], b[j], q), q);
    }
    trim(r);
    return r;
}

void sub_scaled(poly& a, const poly& b, u64 c, std::size_t shift, u64 q) {
    // a -= c * x^shift * b
    if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i + shift] = sub_mod(a[i + shift], mul_mod(c, b[i], q), q);
    trim(a);
}

std::pair<poly, poly> divmod(const poly& num, const poly& den, u64 q) {
    if (den.empty()) fail(errc::bad_argument, "polynomial division by zero");
    poly rem = num, quot;
    const u64 lead_inv = inv_mod(den.back(), q);
    while (deg(rem) >= deg(den)) {
        std::size_t shift = rem.size() - den.size();
        u64 c = mul_mod(rem.back(), lead_inv, q);
        if (quot.size() < shift + 1) quot.resize(shift + 1, 0);
        quot[shift] = c;
        sub_scaled(rem, den, c, shift, q);
    }
    trim(quot);
    return {quot, rem};
}

// master polynomial prod (x - x_i) and full interpolation through all points
poly master_poly(std::span<const FieldPoint> pts, u64 q) {
    poly m{1};
    for (const auto& p : pts) m = mul(m, {sub_mod(0, p.x % q, q), 1}, q);
    return m;
}

poly interpolate_raw(std::span<const FieldPoint> pts, const poly& m, u64 q) {
    poly acc;
    for (const auto& p : pts) {
        // m / (x - x_i) by synthetic division
        poly n(m.size() - 1);
        u64 carry = 0;
        for (std::size_t j = m.size(); j-- > 1;) {
            carry = add_mod(m[j], mul_mod(carry, p.x % q, q), q);
            n[j - 1] = carry;
        }
        u64 w = eval_raw(n, p.x % q, q);
        if (w == 0) fail(errc::duplicate_abscissa, "repeated x value");
        u64 scale = mul_mod(p.y % q, inv_mod(w, q), q);
        if (acc.size() < n.size()) acc.resize(n.size(), 0);
        for (std::size_t j = 0; j < n.size(); ++j)
            acc[j] = add_mod(acc[j], mul_mod(scale, n[j], q), q);
    }
    trim(acc);
    return acc;
}

FieldPoly to_fixed(poly p, int k, u64 q) {
    p.resize((std::size_t)k, 0);
    return FieldPoly{q, std::move(p)};
}

void check_distinct(std::span<const FieldPoint> pts, u64 q) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].x % q == pts[j].x % q)
                fail(errc::duplicate_abscissa, "repeated x value");
}

} // namespace

FieldPoly lagrange_interpolate(std::span<const FieldPoint> pts, int k, u64 q) {
    if (k < 1 || (int)pts.size() != k)
        fail(errc::bad_argument, "interpolation needs exactly k points");
    if (!is_prime(q) || q >= (1ull << 63)) fail(errc::bad_argument, "q must be a prime below 2^63");
    check_distinct(pts, q);
    poly m = master_poly(pts, q);
    poly f = interpolate_raw(pts, m, q);
    return to_fixed(std::move(f), k, q);
}

std::optional<FieldPoly> rs_decode(std::span<const FieldPoint> pts, int k, u64 q) {
    const int w = (int)pts.size();
    if (k < 1 || w < k) fail(errc::bad_argument, "need at least k points to decode");
    if (!is_prime(q) || q >= (1ull << 63)) fail(errc::bad_argument, "q must be a prime below 2^63");
    check_distinct(pts, q);

    poly g0 = master_poly(pts, q);
    poly g1 = interpolate_raw(pts, g0, q);

    // Gao decoding: run the extended Euclidean algorithm on (g0, g1) until
    // the remainder drops below (w + k) / 2, then divide out the multiplier.
    poly r0 = g0, r1 = g1;
    poly v0, v1{1};
    while (2 * deg(r1) >= w + k) {
        auto [quot, rem] = divmod(r0, r1, q);
        poly v2 = v0;
        sub_scaled(v2, mul(quot, v1, q), 1, 0, q);
        r0 = std::move(r1);
        r1 = std::move(rem);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r1.empty() && v1.empty()) return std::nullopt;

    poly f;
    if (v1.empty()) return std::nullopt;
    auto [quot, rem] = divmod(r1, v1, q);
    if (!rem.empty()) return std::nullopt;
    f = std::move(quot);
    if (deg(f) >= k) return std::nullopt;

    const int needed = (w + k + 1) / 2;
    int agree = 0;
    for (const auto& p : pts)
        if (eval_raw(f, p.x % q, q) == p.y % q) ++agree;
    if (agree < needed) return std::nullopt;
    return to_fixed(std::move(f), k, q);
}

// ---- commitment -----------------------------------------------------------

std::string Commitment::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s(64, '0');
    for (int i = 0; i < 32; ++i) {
        s[2 * i] = digits[digest[i] >> 4];
        s[2 * i + 1] = digits[digest[i] & 0xf];
    }
    return s;
}

std::optional<Commitment> Commitment::from_hex(std::string_view s) {
    if (s.size() != 64) return std::nullopt;
    Commitment c;
    for (int i = 0; i < 32; ++i) {
        int v = 0;
        for (int j = 0; j < 2; ++j) {
            char ch = s[2 * i + j];
            int d;
            if (ch >= '0' && ch <= '9') d = ch - '0';
            else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
            else return std::nullopt;
            v = v * 16 + d;
        }
        c.digest[i] = (unsigned char)v;
    }
    return c;
}

Commitment commit(const FieldPoly& p) {
    const int width = (std::bit_width(p.q) + 7) / 8;
    std::string buf = "FFV-COMMIT-1|q=" + std::to_string(p.q) +
                      "|k=" + std::to_string(p.k()) + "|";
    for (u64 c : p.coeffs) {
        for (int b = width - 1; b >= 0; --b)
            buf.push_back((char)((c >> (8 * b)) & 0xff));
    }
    Commitment out;
    unsigned int len = 0;
    EVP_Digest(buf.data(), buf.size(), out.digest.data(), &len, EVP_sha256(), nullptr);
    return out;
}

bool verify_commit(const FieldPoly& p, const Commitment& c) {
    return commit(p) == c;
}

} // namespace ffv
