#include "ybforge/classical.hpp"

namespace ybforge::classical {

namespace {

using Tensor1 = std::map<LoopAtom, Scalar>;

void add(Tensor1& t, const LoopAtom& a, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t.emplace(a, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

template <class Map, class Key>
void add_to(Map& t, const Key& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

LoopAtom unit(int power, std::size_t i, std::size_t j) {
    return {LoopAtom::Kind::Unit, power, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
}
LoopAtom central() { return {LoopAtom::Kind::Central, 0, 0, 0}; }
LoopAtom derivation() { return {LoopAtom::Kind::Derivation, 0, 0, 0}; }

// Bracket of two atoms in the loop algebra on matrix units.
Tensor1 bracket(const LoopAtom& a, const LoopAtom& b, const Scalar& scale, bool extended) {
    Tensor1 out;
    using K = LoopAtom::Kind;
    if (a.kind == K::Unit && b.kind == K::Unit) {
        int p = a.power + b.power;
        if (a.j == b.i) add(out, unit(p, a.i, b.j), Scalar(1));
        if (b.j == a.i) add(out, unit(p, b.i, a.j), Scalar(-1));
        if (extended && p == 0 && a.j == b.i && a.i == b.j && a.power != 0)
            add(out, central(), Scalar(a.power) / scale);
        return out;
    }
    if (!extended) return out;
    if (a.kind == K::Derivation && b.kind == K::Unit) add(out, b, Scalar(b.power));
    if (a.kind == K::Unit && b.kind == K::Derivation) add(out, a, Scalar(-a.power));
    return out;
}

bool in_window(const std::array<LoopAtom, 3>& key, int terms) {
    for (auto& a : key)
        if (std::abs(a.power) > terms) return false;
    return true;
}

void add_local(LoopR& r, const Matrix& t, int p1, int p2, const Scalar& c) {
    std::size_t n = r.n;
    for (auto& term : tensor_terms(t, n))
        add_to(r.t, std::array<LoopAtom, 2>{unit(p1, term.i, term.j), unit(p2, term.k, term.l)}, c * term.coeff);
}

}  // namespace

// ------------------------------------------------------------ loop elements

LoopElement LoopElement::mode(int power, const Matrix& x) {
    LoopElement e;
    e.n = x.rows();
    if (!x.is_zero()) e.modes[power] = x;
    return e;
}

LoopElement LoopElement::central(std::size_t n, const Scalar& c) {
    LoopElement e;
    e.n = n;
    e.c = c;
    return e;
}

LoopElement LoopElement::derivation(std::size_t n, const Scalar& d) {
    LoopElement e;
    e.n = n;
    e.d = d;
    return e;
}

LoopElement LoopElement::operator+(const LoopElement& o) const {
    LoopElement e = *this;
    e.n = std::max(n, o.n);
    for (auto& [p, x] : o.modes) {
        auto it = e.modes.find(p);
        if (it == e.modes.end()) {
            e.modes[p] = x;
        } else {
            it->second += x;
            if (it->second.is_zero()) e.modes.erase(it);
        }
    }
    e.c += o.c;
    e.d += o.d;
    return e;
}

LoopElement LoopElement::operator-(const LoopElement& o) const { return *this + Scalar(-1) * o; }

bool LoopElement::operator==(const LoopElement& o) const { return (*this - o).is_zero(); }

bool LoopElement::is_zero() const {
    for (auto& [p, x] : modes)
        if (!x.is_zero()) return false;
    return c.is_zero() && d.is_zero();
}

LoopElement operator*(const Scalar& s, const LoopElement& a) {
    LoopElement e;
    e.n = a.n;
    if (s.is_zero()) return e;
    for (auto& [p, x] : a.modes) e.modes[p] = s * x;
    e.c = s * a.c;
    e.d = s * a.d;
    return e;
}

LoopElement loop_bracket(const LoopElement& a, const LoopElement& b, const Scalar& scale, bool extended) {
    LoopElement out;
    out.n = std::max(a.n, b.n);
    for (auto& [p, x] : a.modes)
        for (auto& [q, y] : b.modes) {
            out = out + LoopElement::mode(p + q, commutator(x, y));
            if (extended && p + q == 0 && p != 0) out.c += Scalar(p) * trace(x * y) / scale;
        }
    if (extended) {
        for (auto& [q, y] : b.modes)
            if (q != 0 && !a.d.is_zero()) out = out + LoopElement::mode(q, (a.d * Scalar(q)) * y);
        for (auto& [p, x] : a.modes)
            if (p != 0 && !b.d.is_zero()) out = out + LoopElement::mode(p, (b.d * Scalar(-p)) * x);
    }
    return out;
}

bool in_twisted_loop(const LoopElement& a, const TwistedLoopSpec& s) {
    for (auto& [p, x] : a.modes) {
        int j = ((p % s.k) + s.k) % s.k;
        if (s.project(x, j) != x) return false;
    }
    return true;
}

LoopElement random_loop_element(const std::vector<Matrix>& basis, int degree, std::mt19937& rng,
                                const TwistedLoopSpec* twisted) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    LoopElement e;
    e.n = basis.front().rows();
    for (int p = -degree; p <= degree; ++p) {
        Matrix x(e.n, e.n);
        for (auto& b : basis) x += Scalar(coeff(rng)) * b;
        if (twisted) x = twisted->project(x, ((p % twisted->k) + twisted->k) % twisted->k);
        e = e + LoopElement::mode(p, x);
    }
    e.c = Scalar(coeff(rng));
    e.d = Scalar(coeff(rng));
    return e;
}

// ------------------------------------------------------------ loop tensors

LoopR loop_expand(const TwistedLoopSpec& s, int terms) {
    if (terms < 1) fail(ErrorKind::InvalidArgument, "at least one loop term is needed");
    LoopR r;
    r.n = s.n;
    r.scale = s.scale;
    r.terms = terms;
    r.k = s.k;
    add_local(r, standard_part(s.fixed), 0, 0, Scalar(1));
    for (int p = 1; p <= terms; ++p) add_local(r, s.parts[p % s.k], p, -p, Scalar(1));
    return r;
}

LoopR r_extended(const LoopR& r, const Scalar& u) {
    LoopR out = r;
    add_to(out.t, std::array<LoopAtom, 2>{central(), derivation()}, u);
    add_to(out.t, std::array<LoopAtom, 2>{derivation(), central()}, Scalar(1) - u);
    return out;
}

LoopTensor3 loop_cybe_residual(const LoopR& r, Bracket mode) {
    if (mode == Bracket::TwistedExtended && r.k < 2)
        fail(ErrorKind::InvalidArgument, "the twisted bracket needs a twisted loop expansion");
    bool extended = mode != Bracket::Plain;
    LoopTensor3 out;
    for (auto& [x, cx] : r.t)
        for (auto& [y, cy] : r.t) {
            Scalar c = cx * cy;
            // [r12, r13]: legs (x0 y0), x1, y1.
            for (auto& [z, cz] : bracket(x[0], y[0], r.scale, extended)) {
                std::array<LoopAtom, 3> key{z, x[1], y[1]};
                if (in_window(key, r.terms)) add_to(out, key, c * cz);
            }
            // [r12, r23]: x0, (x1 y0), y1.
            for (auto& [z, cz] : bracket(x[1], y[0], r.scale, extended)) {
                std::array<LoopAtom, 3> key{x[0], z, y[1]};
                if (in_window(key, r.terms)) add_to(out, key, c * cz);
            }
            // [r13, r23]: x0, y0, (x1 y1).
            for (auto& [z, cz] : bracket(x[1], y[1], r.scale, extended)) {
                std::array<LoopAtom, 3> key{x[0], y[0], z};
                if (in_window(key, r.terms)) add_to(out, key, c * cz);
            }
        }
    return out;
}

LoopTensor3 commutator_with_cd(const LoopR& r) {
    LoopTensor3 out;
    for (auto& [x, cx] : r.t)
        for (auto& [z, cz] : bracket(x[1], derivation(), r.scale, true))
            add_to(out, std::array<LoopAtom, 3>{x[0], central(), z}, cx * cz);
    return out;
}

LoopTensor3 residue_term(const LoopR& r) {
    LoopTensor3 out;
    for (auto& [x, cx] : r.t)
        if (x[1].kind == LoopAtom::Kind::Unit && x[1].power != 0)
            add_to(out, std::array<LoopAtom, 3>{x[0], central(), x[1]}, Scalar(x[1].power) * cx);
    return out;
}

LoopTensor3 operator+(const LoopTensor3& a, const LoopTensor3& b) {
    LoopTensor3 out = a;
    for (auto& [k, c] : b) add_to(out, k, c);
    return out;
}

LoopTensor3 operator-(const LoopTensor3& a, const LoopTensor3& b) {
    LoopTensor3 out = a;
    for (auto& [k, c] : b) add_to(out, k, -c);
    return out;
}

ExtensionReport verify_extension(const LoopR& r, const Scalar& u) {
    Bracket ext = r.k > 1 ? Bracket::TwistedExtended : Bracket::Extended;
    ExtensionReport rep;
    LoopTensor3 plain = loop_cybe_residual(r, Bracket::Plain);
    LoopTensor3 extended = loop_cybe_residual(r, ext);
    LoopTensor3 residue = residue_term(r);
    LoopTensor3 cd = commutator_with_cd(r);
    rep.plain_zero = plain.empty();
    LoopTensor3 cocycle = extended - plain;
    if (!residue.empty() && (cocycle - residue).empty()) {
        rep.cocycle_matches = true;
        rep.cocycle_sign = 1;
    } else if (!residue.empty() && (cocycle + residue).empty()) {
        rep.cocycle_matches = true;
        rep.cocycle_sign = -1;
    }
    LoopTensor3 hat = loop_cybe_residual(r_extended(r, u), ext);
    rep.identity_holds = (hat - (extended + cd)).empty();
    rep.rhat_zero = hat.empty();
    rep.terms_checked = extended.size() + cd.size() + plain.size();
    return rep;
}

nlohmann::json to_json(const LoopTensor3& t) {
    auto atom = [](const LoopAtom& a) -> nlohmann::json {
        switch (a.kind) {
            case LoopAtom::Kind::Central: return {"c"};
            case LoopAtom::Kind::Derivation: return {"d"};
            default: return {"E", a.power, a.i, a.j};
        }
    };
    nlohmann::json entries = nlohmann::json::array();
    for (auto& [k, c] : t) entries.push_back({atom(k[0]), atom(k[1]), atom(k[2]), c.str()});
    return {{"legs", 3}, {"entries", entries}};
}

}  // namespace ybforge::classical
