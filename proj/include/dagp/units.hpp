#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dagp {

// Physical-unit signature: integer exponents over (m, s, kg, K, V), written
// [v,w,x,y,z].  Multiplication adds exponents, division subtracts them, and
// addition/subtraction require identical signatures.
struct UnitSignature {
    std::array<int, 5> exp{};

    friend bool operator==(const UnitSignature&, const UnitSignature&) = default;
    friend auto operator<=>(const UnitSignature&, const UnitSignature&) = default;
};

inline constexpr UnitSignature kDimensionless{};

inline bool is_dimensionless(const UnitSignature& s) { return s == kDimensionless; }

// Raised when addition or subtraction joins operands with different
// signatures.
class IncommensurableError : public std::runtime_error {
public:
    IncommensurableError(const UnitSignature& a, const UnitSignature& b);
};

class SignatureParseError : public std::runtime_error {
public:
    explicit SignatureParseError(const std::string& what)
        : std::runtime_error(what) {}
};

UnitSignature sig_mul(const UnitSignature& a, const UnitSignature& b);
UnitSignature sig_div(const UnitSignature& a, const UnitSignature& b);
UnitSignature sig_pow(const UnitSignature& a, int k);

// Returns a when a == b, otherwise throws IncommensurableError.
UnitSignature sig_addsub_check(const UnitSignature& a, const UnitSignature& b);

// Bracketed 5-tuple text form, e.g. "[1,-2,0,0,0]".
std::string to_string(const UnitSignature& s);
UnitSignature parse_signature(std::string_view text);

struct SignatureHash {
    std::size_t operator()(const UnitSignature& s) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (int e : s.exp) {
            h ^= static_cast<std::size_t>(static_cast<unsigned>(e));
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

}  // namespace dagp
