#include "dagp/units.hpp"

#include <charconv>

namespace dagp {

IncommensurableError::IncommensurableError(const UnitSignature& a,
                                           const UnitSignature& b)
    : std::runtime_error("incommensurable operands: " + to_string(a) + " vs " +
                         to_string(b)) {}

UnitSignature sig_mul(const UnitSignature& a, const UnitSignature& b) {
    UnitSignature r;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] = a.exp[i] + b.exp[i];
    return r;
}

UnitSignature sig_div(const UnitSignature& a, const UnitSignature& b) {
    UnitSignature r;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] = a.exp[i] - b.exp[i];
    return r;
}

UnitSignature sig_pow(const UnitSignature& a, int k) {
    UnitSignature r;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] = a.exp[i] * k;
    return r;
}

UnitSignature sig_addsub_check(const UnitSignature& a, const UnitSignature& b) {
    if (a != b) throw IncommensurableError(a, b);
    return a;
}

std::string to_string(const UnitSignature& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.exp.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s.exp[i]);
    }
    out += ']';
    return out;
}

UnitSignature parse_signature(std::string_view text) {
    auto fail = [&] {
        throw SignatureParseError("bad unit signature: '" + std::string(text) + "'");
    };
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '[') fail();
    ++pos;
    UnitSignature sig;
    for (std::size_t i = 0; i < sig.exp.size(); ++i) {
        skip_ws();
        int value = 0;
        auto [ptr, ec] =
            std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc()) fail();
        sig.exp[i] = value;
        pos = static_cast<std::size_t>(ptr - text.data());
        skip_ws();
        const char expected = (i + 1 < sig.exp.size()) ? ',' : ']';
        if (pos >= text.size() || text[pos] != expected) fail();
        ++pos;
    }
    skip_ws();
    if (pos != text.size()) fail();
    return sig;
}

}  // namespace dagp
