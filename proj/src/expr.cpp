#include "dagp/expr.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace dagp {

namespace {

ExprPtr make_node(ExprKind kind, int payload, ExprPtr left, ExprPtr right,
                  UnitSignature sig, int size) {
    auto node = std::make_shared<Expr>();
    node->kind = kind;
    node->payload = payload;
    node->left = std::move(left);
    node->right = std::move(right);
    node->signature = sig;
    node->size = size;
    return node;
}

}  // namespace

ExprPtr Expr::var(int index, const UnitSignature& sig) {
    return make_node(ExprKind::Var, index, nullptr, nullptr, sig, 1);
}

ExprPtr Expr::constant(int value) {
    return make_node(ExprKind::Const, value, nullptr, nullptr, kDimensionless, 1);
}

ExprPtr Expr::add(ExprPtr lhs, ExprPtr rhs) {
    const UnitSignature sig = sig_addsub_check(lhs->signature, rhs->signature);
    const int size = 1 + lhs->size + rhs->size;
    return make_node(ExprKind::Add, 0, std::move(lhs), std::move(rhs), sig, size);
}

ExprPtr Expr::sub(ExprPtr lhs, ExprPtr rhs) {
    const UnitSignature sig = sig_addsub_check(lhs->signature, rhs->signature);
    const int size = 1 + lhs->size + rhs->size;
    return make_node(ExprKind::Sub, 0, std::move(lhs), std::move(rhs), sig, size);
}

ExprPtr Expr::mul(ExprPtr lhs, ExprPtr rhs) {
    const UnitSignature sig = sig_mul(lhs->signature, rhs->signature);
    const int size = 1 + lhs->size + rhs->size;
    return make_node(ExprKind::Mul, 0, std::move(lhs), std::move(rhs), sig, size);
}

ExprPtr Expr::div(ExprPtr lhs, ExprPtr rhs) {
    const UnitSignature sig = sig_div(lhs->signature, rhs->signature);
    const int size = 1 + lhs->size + rhs->size;
    return make_node(ExprKind::Div, 0, std::move(lhs), std::move(rhs), sig, size);
}

namespace {

double eval_rec(const Expr& e, std::span<const double> point) {
    switch (e.kind) {
        case ExprKind::Var:
            return point[static_cast<std::size_t>(e.payload)];
        case ExprKind::Const:
            return static_cast<double>(e.payload);
        case ExprKind::Add:
            return eval_rec(*e.left, point) + eval_rec(*e.right, point);
        case ExprKind::Sub:
            return eval_rec(*e.left, point) - eval_rec(*e.right, point);
        case ExprKind::Mul:
            return eval_rec(*e.left, point) * eval_rec(*e.right, point);
        case ExprKind::Div:
            return eval_rec(*e.left, point) / eval_rec(*e.right, point);
    }
    return 0.0;
}

}  // namespace

std::optional<double> evaluate(const Expr& e, std::span<const double> point) {
    const double value = eval_rec(e, point);
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

namespace {

void key_rec(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::Var:
            out += 'v';
            out += std::to_string(e.payload);
            return;
        case ExprKind::Const:
            out += 'c';
            out += std::to_string(e.payload);
            return;
        case ExprKind::Add:
        case ExprKind::Mul: {
            std::string a, b;
            key_rec(*e.left, a);
            key_rec(*e.right, b);
            if (b < a) std::swap(a, b);
            out += '(';
            out += (e.kind == ExprKind::Add) ? '+' : '*';
            out += ' ';
            out += a;
            out += ' ';
            out += b;
            out += ')';
            return;
        }
        case ExprKind::Sub:
        case ExprKind::Div: {
            out += '(';
            out += (e.kind == ExprKind::Sub) ? '-' : '/';
            out += ' ';
            key_rec(*e.left, out);
            out += ' ';
            key_rec(*e.right, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

std::string canonical_key(const Expr& e) {
    std::string out;
    out.reserve(static_cast<std::size_t>(e.size) * 4);
    key_rec(e, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (&a == &b) return true;
    if (a.kind != b.kind || a.payload != b.payload || a.size != b.size) return false;
    if (a.is_leaf()) return true;
    return structurally_equal(*a.left, *b.left) &&
           structurally_equal(*a.right, *b.right);
}

const Expr* subtree_at(const Expr& root, int position) {
    if (position < 0 || position >= root.size) {
        throw std::out_of_range("expression position " + std::to_string(position) +
                                " out of range (size " + std::to_string(root.size) +
                                ")");
    }
    const Expr* node = &root;
    while (position > 0) {
        --position;  // step past the current node
        if (position < node->left->size) {
            node = node->left.get();
        } else {
            position -= node->left->size;
            node = node->right.get();
        }
    }
    return node;
}

namespace {

ExprPtr splice(const ExprPtr& node, int position, const ExprPtr& replacement) {
    if (position == 0) return replacement;
    --position;
    if (position < node->left->size) {
        ExprPtr new_left = splice(node->left, position, replacement);
        switch (node->kind) {
            case ExprKind::Add: return Expr::add(std::move(new_left), node->right);
            case ExprKind::Sub: return Expr::sub(std::move(new_left), node->right);
            case ExprKind::Mul: return Expr::mul(std::move(new_left), node->right);
            case ExprKind::Div: return Expr::div(std::move(new_left), node->right);
            default: break;
        }
    } else {
        ExprPtr new_right =
            splice(node->right, position - node->left->size, replacement);
        switch (node->kind) {
            case ExprKind::Add: return Expr::add(node->left, std::move(new_right));
            case ExprKind::Sub: return Expr::sub(node->left, std::move(new_right));
            case ExprKind::Mul: return Expr::mul(node->left, std::move(new_right));
            case ExprKind::Div: return Expr::div(node->left, std::move(new_right));
            default: break;
        }
    }
    throw std::logic_error("splice reached a leaf with positions remaining");
}

}  // namespace

ExprPtr substitute_subtree(const ExprPtr& root, int position, ExprPtr replacement,
                           int size_cap) {
    const Expr* old = subtree_at(*root, position);
    if (old->signature != replacement->signature) {
        throw SignatureMismatchError(
            "replacement signature " + to_string(replacement->signature) +
            " differs from subtree signature " + to_string(old->signature));
    }
    const int new_size = root->size - old->size + replacement->size;
    if (size_cap > 0 && new_size > size_cap) {
        throw SizeLimitError("substitution yields " + std::to_string(new_size) +
                             " nodes, cap is " + std::to_string(size_cap));
    }
    return splice(root, position, replacement);
}

namespace {

void infix_rec(const Expr& e, std::span<const std::string> names, std::string& out) {
    switch (e.kind) {
        case ExprKind::Var:
            out += names[static_cast<std::size_t>(e.payload)];
            return;
        case ExprKind::Const:
            out += std::to_string(e.payload);
            return;
        default: {
            static constexpr char symbol[] = {'+', '-', '*', '/'};
            out += '(';
            infix_rec(*e.left, names, out);
            out += symbol[static_cast<int>(e.kind)];
            infix_rec(*e.right, names, out);
            out += ')';
            return;
        }
    }
}

void prefix_rec(const Expr& e, std::span<const std::string> names, std::string& out) {
    switch (e.kind) {
        case ExprKind::Var:
            out += names[static_cast<std::size_t>(e.payload)];
            return;
        case ExprKind::Const:
            out += std::to_string(e.payload);
            return;
        default: {
            static constexpr char symbol[] = {'+', '-', '*', '/'};
            out += '(';
            out += symbol[static_cast<int>(e.kind)];
            out += ' ';
            prefix_rec(*e.left, names, out);
            out += ' ';
            prefix_rec(*e.right, names, out);
            out += ')';
            return;
        }
    }
}

struct PrefixParser {
    std::string_view text;
    std::size_t pos = 0;
    std::span<const std::string> names;
    std::span<const UnitSignature> sigs;

    [[noreturn]] void fail(const std::string& why) {
        throw ExprParseError("prefix parse error at offset " + std::to_string(pos) +
                             ": " + why);
    }

    void skip_ws() {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    }

    ExprPtr parse() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            skip_ws();
            if (pos >= text.size()) fail("missing operator");
            const char op = text[pos++];
            ExprPtr lhs = parse();
            ExprPtr rhs = parse();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') fail("missing ')'");
            ++pos;
            switch (op) {
                case '+': return Expr::add(std::move(lhs), std::move(rhs));
                case '-': return Expr::sub(std::move(lhs), std::move(rhs));
                case '*': return Expr::mul(std::move(lhs), std::move(rhs));
                case '/': return Expr::div(std::move(lhs), std::move(rhs));
                default: fail("unknown operator");
            }
        }
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != ')') ++pos;
        const std::string_view token = text.substr(start, pos - start);
        if (token.empty()) fail("empty token");
        if (token[0] == '-' || (token[0] >= '0' && token[0] <= '9')) {
            int value = 0;
            bool negative = false;
            std::size_t i = 0;
            if (token[0] == '-') {
                negative = true;
                i = 1;
                if (token.size() == 1) fail("lone '-'");
            }
            for (; i < token.size(); ++i) {
                if (token[i] < '0' || token[i] > '9') fail("bad integer constant");
                value = value * 10 + (token[i] - '0');
            }
            return Expr::constant(negative ? -value : value);
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == token) {
                return Expr::var(static_cast<int>(i), sigs[i]);
            }
        }
        fail("unknown variable '" + std::string(token) + "'");
    }
};

}  // namespace

std::string to_infix(const Expr& e, std::span<const std::string> var_names) {
    std::string out;
    infix_rec(e, var_names, out);
    return out;
}

std::string to_prefix(const Expr& e, std::span<const std::string> var_names) {
    std::string out;
    prefix_rec(e, var_names, out);
    return out;
}

ExprPtr parse_prefix(std::string_view text, std::span<const std::string> var_names,
                     std::span<const UnitSignature> var_signatures) {
    PrefixParser parser{text, 0, var_names, var_signatures};
    ExprPtr e = parser.parse();
    parser.skip_ws();
    if (parser.pos != text.size()) parser.fail("trailing input");
    return e;
}

}  // namespace dagp
