#include "mbp/ring_model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace mbp::ring {

namespace {

// Subsets of {0..d-1} of size a, as bitmasks, ordered lexicographically
// on the sorted index sequence.
void combinations(size_t d, size_t a, size_t first, uint32_t mask,
                  std::vector<uint32_t>& out)
{
    if (a == 0) {
        out.push_back(mask);
        return;
    }
    for (size_t i = first; i + a <= d; ++i)
        combinations(d, a - 1, i + 1, mask | (uint32_t(1) << i), out);
}

// Exponent vectors of length d summing to total, in lexicographic order.
void compositions(size_t d, size_t total, std::vector<uint16_t>& cur,
                  std::vector<std::vector<uint16_t>>& out)
{
    if (cur.size() + 1 == d) {
        cur.push_back(uint16_t(total));
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (size_t v = 0; v <= total; ++v) {
        cur.push_back(uint16_t(v));
        compositions(d, total - v, cur, out);
        cur.pop_back();
    }
}

std::vector<size_t> mask_indices(uint32_t mask)
{
    std::vector<size_t> idx;
    for (size_t i = 0; mask >> i; ++i)
        if ((mask >> i) & 1)
            idx.push_back(i);
    return idx;
}

}  // namespace

size_t Monomial::exterior_degree() const
{
    return size_t(std::popcount(ext_mask));
}

bool monomial_less(const Monomial& a, const Monomial& b)
{
    size_t ea = a.exterior_degree(), eb = b.exterior_degree();
    if (ea != eb)
        return ea < eb;
    auto ia = mask_indices(a.ext_mask), ib = mask_indices(b.ext_mask);
    if (ia != ib)
        return ia < ib;
    return a.exp < b.exp;
}

bool Element::is_zero() const
{
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](fp::Scalar c) { return c == 0; });
}

bool Element::operator==(const Element& o) const
{
    return ctx->p() == o.ctx->p() && ctx->rank() == o.ctx->rank() &&
           ctx->model() == o.ctx->model() && degree == o.degree &&
           coeffs == o.coeffs;
}

Context::Context(uint32_t p, size_t rank, Model model, size_t max_degree,
                 size_t n_max)
    : field_(p), rank_(rank), model_(model), max_degree_(max_degree),
      n_max_(n_max)
{
    if (model == Model::NativeP2 && p != 2)
        throw std::invalid_argument("native model requires p = 2");
    if (rank == 0 || rank > 30)
        throw std::invalid_argument("rank must be in [1, 30]");
    if (max_degree == 0)
        throw std::invalid_argument("max degree must be positive");
    // Window covers composites and nilpotence checks at degree <= D:
    // 2|Q_{n_max}| dominates sum_{i<=n_max} |Q_i|.
    window_ = max_degree + 2 * q_shift(n_max);
}

ContextPtr Context::make(uint32_t p, size_t rank, Model model,
                         size_t max_degree, size_t n_max)
{
    return ContextPtr(new Context(p, rank, model, max_degree, n_max));
}

size_t Context::q_shift(size_t i) const
{
    size_t pw = 1;
    for (size_t k = 0; k < i; ++k)
        pw *= p();
    return 2 * pw - 1;
}

std::vector<Monomial> Context::enumerate_basis(size_t t) const
{
    std::vector<Monomial> out;
    if (model_ == Model::NativeP2) {
        std::vector<std::vector<uint16_t>> exps;
        std::vector<uint16_t> cur;
        compositions(rank_, t, cur, exps);
        for (auto& e : exps)
            out.push_back(Monomial{0, std::move(e)});
        return out;
    }
    for (size_t a = 0; a <= std::min(rank_, t); ++a) {
        if ((t - a) % 2 != 0)
            continue;
        size_t bt = (t - a) / 2;
        std::vector<uint32_t> masks;
        combinations(rank_, a, 0, 0, masks);
        std::vector<std::vector<uint16_t>> exps;
        std::vector<uint16_t> cur;
        compositions(rank_, bt, cur, exps);
        for (uint32_t m : masks)
            for (const auto& e : exps)
                out.push_back(Monomial{m, e});
    }
    return out;
}

const std::vector<Monomial>& Context::basis(size_t t) const
{
    if (t > window_)
        throw degree_out_of_range(
            "degree " + std::to_string(t) + " beyond window " +
            std::to_string(window_) +
            " (raise max_degree or n_max to widen the window)");
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = basis_cache_.find(t);
    if (it == basis_cache_.end())
        it = basis_cache_.emplace(t, enumerate_basis(t)).first;
    return it->second;
}

size_t Context::monomial_index(size_t t, const Monomial& m) const
{
    const auto& b = basis(t);
    auto it = std::lower_bound(b.begin(), b.end(), m, monomial_less);
    if (it == b.end() || !(*it == m))
        throw std::logic_error("monomial not in basis of its degree");
    return size_t(it - b.begin());
}

size_t Context::monomial_degree(const Monomial& m) const
{
    size_t s = 0;
    for (auto e : m.exp)
        s += e;
    if (model_ == Model::NativeP2)
        return s;
    return m.exterior_degree() + 2 * s;
}

Element Context::zero(size_t t) const
{
    return Element{shared_from_this(), t, fp::Vec(dim(t), 0)};
}

Element Context::unit() const
{
    Element e = zero(0);
    e.coeffs[0] = 1;
    return e;
}

Element Context::from_monomial(const Monomial& m, fp::Scalar c) const
{
    size_t t = monomial_degree(m);
    Element e = zero(t);
    e.coeffs[monomial_index(t, m)] = c % p();
    return e;
}

fp::Subspace Context::polynomial_part_subspace(size_t t) const
{
    size_t n = dim(t);
    if (t == 0)
        return fp::Subspace::zero(n);
    const auto& b = basis(t);
    fp::Matrix gens(0, n);
    std::vector<fp::Scalar> rows;
    for (size_t j = 0; j < n; ++j) {
        bool poly;
        if (model_ == Model::NativeP2)
            poly = std::all_of(b[j].exp.begin(), b[j].exp.end(),
                               [](uint16_t e) { return e % 2 == 0; });
        else
            poly = b[j].ext_mask == 0;
        if (!poly)
            continue;
        fp::Vec row(n, 0);
        row[j] = 1;
        rows.insert(rows.end(), row.begin(), row.end());
        ++gens.rows;
    }
    gens.entries = std::move(rows);
    return fp::Subspace::span(field_, gens);
}

std::pair<size_t, size_t> exterior_block_range(const Context& ctx, size_t t,
                                               size_t a)
{
    const auto& b = ctx.basis(t);
    size_t lo = 0;
    while (lo < b.size() && b[lo].exterior_degree() < a)
        ++lo;
    size_t hi = lo;
    while (hi < b.size() && b[hi].exterior_degree() == a)
        ++hi;
    return {lo, hi};
}

Element add(const Element& x, const Element& y)
{
    if (!(x.ctx == y.ctx || (x.ctx->p() == y.ctx->p() &&
                             x.ctx->rank() == y.ctx->rank() &&
                             x.ctx->model() == y.ctx->model())))
        throw context_mismatch("add: elements from different contexts");
    if (x.degree != y.degree)
        throw context_mismatch("add: inhomogeneous sum");
    Element out = x;
    for (size_t i = 0; i < out.coeffs.size(); ++i)
        out.coeffs[i] = x.ctx->field().add(out.coeffs[i], y.coeffs[i]);
    return out;
}

Element scale(const Element& x, fp::Scalar c)
{
    Element out = x;
    for (auto& v : out.coeffs)
        v = x.ctx->field().mul(v, c % x.ctx->p());
    return out;
}

Element sub(const Element& x, const Element& y)
{
    return add(x, scale(y, x.ctx->p() - 1));
}

Element multiply(const Element& x, const Element& y)
{
    const auto& ctx = *x.ctx;
    if (ctx.p() != y.ctx->p() || ctx.rank() != y.ctx->rank() ||
        ctx.model() != y.ctx->model())
        throw context_mismatch("multiply: elements from different contexts");
    size_t t = x.degree + y.degree;
    Element out = x.ctx->zero(t);
    const auto& bx = ctx.basis(x.degree);
    const auto& by = ctx.basis(y.degree);
    const auto& F = ctx.field();
    for (size_t i = 0; i < bx.size(); ++i) {
        if (x.coeffs[i] == 0)
            continue;
        for (size_t j = 0; j < by.size(); ++j) {
            if (y.coeffs[j] == 0)
                continue;
            const Monomial& mx = bx[i];
            const Monomial& my = by[j];
            if (mx.ext_mask & my.ext_mask)
                continue;  // exterior square
            // Koszul sign: one transposition per pair (i in E_x, j in E_y)
            // with i > j. Vacuous in the native model and at p = 2.
            size_t inversions = 0;
            for (size_t b = 0; my.ext_mask >> b; ++b)
                if ((my.ext_mask >> b) & 1)
                    inversions += size_t(
                        std::popcount(mx.ext_mask >> (b + 1)));
            fp::Scalar c = F.mul(x.coeffs[i], y.coeffs[j]);
            if (inversions % 2 == 1)
                c = F.neg(c);
            Monomial prod;
            prod.ext_mask = mx.ext_mask | my.ext_mask;
            prod.exp.resize(ctx.rank());
            for (size_t k = 0; k < ctx.rank(); ++k)
                prod.exp[k] = uint16_t(mx.exp[k] + my.exp[k]);
            size_t idx = ctx.monomial_index(t, prod);
            out.coeffs[idx] = F.add(out.coeffs[idx], c);
        }
    }
    return out;
}

std::string Context::print(const Monomial& m) const
{
    std::ostringstream os;
    bool first = true;
    auto put = [&](const std::string& s) {
        if (!first)
            os << '*';
        os << s;
        first = false;
    };
    if (model_ == Model::NativeP2) {
        for (size_t k = 0; k < rank_; ++k)
            if (m.exp[k] > 0) {
                std::string s = "u" + std::to_string(k + 1);
                if (m.exp[k] > 1)
                    s += "^" + std::to_string(m.exp[k]);
                put(s);
            }
    }
    else {
        for (size_t k : mask_indices(m.ext_mask))
            put("u" + std::to_string(k + 1));
        for (size_t k = 0; k < rank_; ++k)
            if (m.exp[k] > 0) {
                std::string s = "v" + std::to_string(k + 1);
                if (m.exp[k] > 1)
                    s += "^" + std::to_string(m.exp[k]);
                put(s);
            }
    }
    if (first)
        os << '1';
    return os.str();
}

std::string Context::print(const Element& e) const
{
    const auto& b = basis(e.degree);
    std::ostringstream os;
    bool first = true;
    for (size_t j = 0; j < b.size(); ++j) {
        if (e.coeffs[j] == 0)
            continue;
        if (!first)
            os << " + ";
        if (e.coeffs[j] != 1)
            os << e.coeffs[j] << '*';
        os << print(b[j]);
        first = false;
    }
    if (first)
        os << '0';
    return os.str();
}

namespace {

struct Parser {
    const Context& ctx;
    const std::string& s;
    size_t pos = 0;

    void skip_ws()
    {
        while (pos < s.size() && std::isspace((unsigned char)s[pos]))
            ++pos;
    }
    bool eof()
    {
        skip_ws();
        return pos >= s.size();
    }
    char peek()
    {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg)
    {
        throw parse_error(msg + " at position " + std::to_string(pos), pos);
    }
    uint64_t number()
    {
        skip_ws();
        if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
            fail("expected a number");
        uint64_t n = 0;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
            n = n * 10 + uint64_t(s[pos] - '0');
            if (n > 1'000'000)
                fail("number too large");
            ++pos;
        }
        return n;
    }

    // factor := ('u'|'v') index ['^' exponent] | number
    // term   := factor ('*' factor)*
    // Returns the coefficient and fills the monomial.
    fp::Scalar term(Monomial& m)
    {
        m.ext_mask = 0;
        m.exp.assign(ctx.rank(), 0);
        uint64_t coef = 1;
        bool any = false;
        while (true) {
            char c = peek();
            if (c == 'u' || c == 'v') {
                ++pos;
                size_t idx = size_t(number());
                if (idx < 1 || idx > ctx.rank())
                    fail("generator index out of range 1.." +
                         std::to_string(ctx.rank()));
                uint64_t e = 1;
                if (peek() == '^') {
                    ++pos;
                    e = number();
                }
                if (c == 'v') {
                    if (ctx.model() == Model::NativeP2)
                        fail("no 'v' generators in the native p=2 model");
                    m.exp[idx - 1] = uint16_t(m.exp[idx - 1] + e);
                }
                else if (ctx.model() == Model::NativeP2) {
                    m.exp[idx - 1] = uint16_t(m.exp[idx - 1] + e);
                }
                else {
                    uint32_t bit = uint32_t(1) << (idx - 1);
                    if (e != 1 || (m.ext_mask & bit))
                        fail("repeated exterior generator u" +
                             std::to_string(idx));
                    m.ext_mask |= bit;
                }
            }
            else if (std::isdigit((unsigned char)c)) {
                coef = (coef * number()) % ctx.p();
            }
            else {
                fail("expected a factor");
            }
            any = true;
            if (peek() == '*')
                ++pos;
            else
                break;
        }
        if (!any)
            fail("empty term");
        return fp::Scalar(coef % ctx.p());
    }
};

}  // namespace

Monomial Context::parse_monomial(const std::string& s) const
{
    Parser pr{*this, s};
    Monomial m;
    fp::Scalar c = pr.term(m);
    if (!pr.eof())
        pr.fail("trailing input");
    if (c != 1)
        pr.fail("monomial syntax admits no coefficient");
    if (monomial_degree(m) > window_)
        throw degree_out_of_range("monomial degree beyond window");
    return m;
}

Element Context::parse_element(const std::string& s) const
{
    Parser pr{*this, s};
    bool negate = false;
    if (pr.peek() == '-') {
        ++pr.pos;
        negate = true;
    }
    Monomial m;
    fp::Scalar c = pr.term(m);
    if (monomial_degree(m) > window_)
        throw degree_out_of_range("element degree beyond window");
    Element out = from_monomial(m, negate ? field().neg(c) : c);
    while (!pr.eof()) {
        char op = pr.peek();
        if (op != '+' && op != '-')
            pr.fail("expected '+' or '-'");
        ++pr.pos;
        Monomial m2;
        fp::Scalar c2 = pr.term(m2);
        if (monomial_degree(m2) != out.degree)
            pr.fail("inhomogeneous element");
        out = add(out, from_monomial(m2, op == '-' ? field().neg(c2) : c2));
    }
    return out;
}

}  // namespace mbp::ring
