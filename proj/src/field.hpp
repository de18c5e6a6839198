#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ffv {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime(u64 n);
u64 next_prime_at_least(u64 n);

// Field arithmetic mod a prime q.  q must fit in 63 bits so sums never wrap.
inline u64 add_mod(u64 a, u64 b, u64 q) { u64 s = a + b; return s >= q ? s - q : s; }
inline u64 sub_mod(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }
inline u64 mul_mod(u64 a, u64 b, u64 q) { return (u64)((u128)a * b % q); }
u64 pow_mod(u64 a, u64 e, u64 q);
u64 inv_mod(u64 a, u64 q); // q prime, a != 0 mod q

/// Polynomial over F_q with a fixed coefficient count k (low degree first);
/// trailing zeros are significant for the commitment.
struct FieldPoly {
    u64 q = 2;
    std::vector<u64> coeffs;
    int k() const { return (int)coeffs.size(); }
    bool operator==(const FieldPoly&) const = default;
};

u64 poly_eval(const FieldPoly& p, u64 x);

struct FieldPoint {
    u64 x = 0, y = 0;
};

/// Unique polynomial of length k through k points with distinct x values.
/// Throws errc::duplicate_abscissa on repeated x, errc::bad_argument if
/// pts.size() != k.
FieldPoly lagrange_interpolate(std::span<const FieldPoint> pts, int k, u64 q);

/// Reed-Solomon list-of-one decoding: given w >= k points with distinct x,
/// returns the unique polynomial of length k agreeing with at least
/// ceil((w+k)/2) of them, or nullopt when no such polynomial exists.
/// Corrects up to floor((w-k)/2) wrong points; for w == k it degenerates to
/// plain interpolation.
std::optional<FieldPoly> rs_decode(std::span<const FieldPoint> pts, int k, u64 q);

struct Commitment {
    std::array<unsigned char, 32> digest{};
    bool operator==(const Commitment&) const = default;
    std::string hex() const;
    static std::optional<Commitment> from_hex(std::string_view s);
};

/// SHA-256 over the canonical encoding
///   "FFV-COMMIT-1|q=<dec>|k=<dec>|" + coeffs, each big-endian in
///   ceil(bits(q)/8) bytes, low-degree coefficient first.
Commitment commit(const FieldPoly& p);
bool verify_commit(const FieldPoly& p, const Commitment& c);

} // namespace ffv
