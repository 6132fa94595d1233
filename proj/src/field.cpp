#include "parafield/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace parafield {

namespace {

constexpr uint64_t kDefaultCap = 1ull << 16;
constexpr uint64_t kTableLimit = 512;  // build q*q tables up to this order

bool is_prime(uint32_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

// Remainder of a mod b over Z_p; both dense coefficient vectors, constant
// term first, b monic.
std::vector<uint32_t> poly_mod(std::vector<uint32_t> a, const std::vector<uint32_t>& b, uint32_t p) {
    const size_t db = b.size() - 1;
    while (a.size() > db) {
        const uint32_t lead = a.back();
        const size_t shift = a.size() - 1 - db;
        if (lead != 0) {
            for (size_t j = 0; j <= db; ++j) {
                uint64_t cur = a[shift + j];
                cur = (cur + static_cast<uint64_t>(p - lead % p) * b[j]) % p;
                a[shift + j] = static_cast<uint32_t>(cur);
            }
        }
        a.pop_back();
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

bool poly_is_zero(const std::vector<uint32_t>& a) {
    return std::all_of(a.begin(), a.end(), [](uint32_t c) { return c == 0; });
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(const std::vector<uint32_t>& poly, uint32_t p) {
    const size_t deg = poly.size() - 1;
    for (size_t d = 1; 2 * d <= deg; ++d) {
        uint64_t count = 1;
        for (size_t i = 0; i < d; ++i) count *= p;
        for (uint64_t r = 0; r < count; ++r) {
            std::vector<uint32_t> divisor(d + 1);
            uint64_t rest = r;
            for (size_t j = 0; j < d; ++j) {
                divisor[j] = static_cast<uint32_t>(rest % p);
                rest /= p;
            }
            divisor[d] = 1;
            if (poly_is_zero(poly_mod(poly, divisor, p))) return false;
        }
    }
    return true;
}

}  // namespace

uint64_t field_order_cap() {
    if (const char* env = std::getenv("PARAFIELD_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v >= 3) return v;
    }
    return kDefaultCap;
}

FieldPtr Field::make(uint32_t p, uint32_t m, uint64_t cap) {
    if (cap == 0) cap = field_order_cap();
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("characteristic must be an odd prime, got " + std::to_string(p));
    if (!is_prime(p)) throw std::invalid_argument("characteristic is not prime: " + std::to_string(p));
    if (m < 1) throw std::invalid_argument("extension degree must be >= 1");

    uint64_t q = 1;
    for (uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > cap) {
            throw SizeCapError("field order " + std::to_string(p) + "^" + std::to_string(m) +
                               " exceeds cap " + std::to_string(cap));
        }
    }

    std::vector<uint32_t> modulus;
    if (m == 1) {
        modulus = {0, 1};  // the polynomial x; residues are plain integers mod p
    } else {
        // Lexicographically smallest monic irreducible of degree m, scanning
        // coefficient tuples (c_0, ..., c_{m-1}) in increasing order.
        std::vector<uint64_t> place(m);
        place[m - 1] = 1;
        for (int j = static_cast<int>(m) - 2; j >= 0; --j) place[j] = place[j + 1] * p;
        bool found = false;
        for (uint64_t r = 0; r < q && !found; ++r) {
            std::vector<uint32_t> cand(m + 1);
            for (uint32_t j = 0; j < m; ++j) cand[j] = static_cast<uint32_t>((r / place[j]) % p);
            cand[m] = 1;
            if (is_irreducible(cand, p)) {
                modulus = std::move(cand);
                found = true;
            }
        }
        if (!found) throw InternalCheckError("no irreducible polynomial found");  // cannot happen
    }
    return FieldPtr(new Field(p, m, std::move(modulus)));
}

Field::Field(uint32_t p, uint32_t m, std::vector<uint32_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
    q_ = 1;
    for (uint32_t i = 0; i < m_; ++i) q_ *= p_;
    place_.resize(m_);
    place_[m_ - 1] = 1;
    for (int j = static_cast<int>(m_) - 2; j >= 0; --j) place_[j] = place_[j + 1] * p_;

    has_tables_ = q_ <= kTableLimit;
    if (has_tables_) {
        const size_t q = static_cast<size_t>(q_);
        add_table_.resize(q * q);
        mul_table_.resize(q * q);
        neg_table_.resize(q);
        inv_table_.resize(q);
        for (size_t a = 0; a < q; ++a) {
            for (size_t b = 0; b < q; ++b) {
                uint32_t da[16], db[16], dc[16];
                decode(static_cast<uint32_t>(a), da);
                decode(static_cast<uint32_t>(b), db);
                for (uint32_t j = 0; j < m_; ++j) dc[j] = (da[j] + db[j]) % p_;
                add_table_[a * q + b] = static_cast<uint16_t>(encode(dc));
                mul_table_[a * q + b] = static_cast<uint16_t>(mul_slow(static_cast<uint32_t>(a), static_cast<uint32_t>(b)));
            }
        }
        for (size_t a = 0; a < q; ++a) {
            uint32_t da[16], dn[16];
            decode(static_cast<uint32_t>(a), da);
            for (uint32_t j = 0; j < m_; ++j) dn[j] = (p_ - da[j]) % p_;
            neg_table_[a] = encode(dn);
            inv_table_[a] = a == 0 ? 0 : pow_i(static_cast<uint32_t>(a), q_ - 2);
        }
    }

    // Trace and character tables are cheap (q entries) and always available.
    trace_table_.resize(q_);
    char_table_.resize(q_);
    for (uint64_t a = 0; a < q_; ++a) {
        uint32_t acc = static_cast<uint32_t>(a);
        uint32_t sum = static_cast<uint32_t>(a);
        for (uint32_t i = 1; i < m_; ++i) {
            acc = pow_i(acc, p_);  // Frobenius
            sum = add_i(sum, acc);
        }
        // sum lies in the prime subfield: coefficients (c, 0, ..., 0)
        uint32_t digits[16];
        decode(sum, digits);
        for (uint32_t j = 1; j < m_; ++j) {
            if (digits[j] != 0) throw InternalCheckError("trace left the prime subfield");
        }
        trace_table_[a] = static_cast<uint16_t>(digits[0]);
        const double angle = 2.0 * std::numbers::pi * digits[0] / p_;
        char_table_[a] = Complex(std::cos(angle), std::sin(angle));
    }
}

void Field::decode(uint32_t idx, uint32_t* digits) const {
    for (uint32_t j = 0; j < m_; ++j) digits[j] = static_cast<uint32_t>((idx / place_[j]) % p_);
}

uint32_t Field::encode(const uint32_t* digits) const {
    uint64_t r = 0;
    for (uint32_t j = 0; j < m_; ++j) r += digits[j] * place_[j];
    return static_cast<uint32_t>(r);
}

uint32_t Field::mul_slow(uint32_t a, uint32_t b) const {
    uint32_t da[16], db[16];
    decode(a, da);
    decode(b, db);
    uint32_t prod[31] = {0};
    for (uint32_t i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (uint32_t j = 0; j < m_; ++j) {
            prod[i + j] = static_cast<uint32_t>((prod[i + j] + static_cast<uint64_t>(da[i]) * db[j]) % p_);
        }
    }
    // reduce modulo the monic modulus
    for (int k = 2 * static_cast<int>(m_) - 2; k >= static_cast<int>(m_); --k) {
        const uint32_t lead = prod[k];
        if (lead == 0) continue;
        prod[k] = 0;
        for (uint32_t j = 0; j < m_; ++j) {
            prod[k - m_ + j] =
                static_cast<uint32_t>((prod[k - m_ + j] + static_cast<uint64_t>(p_ - lead) * modulus_[j]) % p_);
        }
    }
    return encode(prod);
}

uint32_t Field::add_i(uint32_t a, uint32_t b) const {
    if (has_tables_) return add_table_[static_cast<size_t>(a) * q_ + b];
    uint32_t da[16], db[16], dc[16];
    decode(a, da);
    decode(b, db);
    for (uint32_t j = 0; j < m_; ++j) dc[j] = (da[j] + db[j]) % p_;
    return encode(dc);
}

uint32_t Field::neg_i(uint32_t a) const {
    if (has_tables_) return neg_table_[a];
    uint32_t da[16], dn[16];
    decode(a, da);
    for (uint32_t j = 0; j < m_; ++j) dn[j] = (p_ - da[j]) % p_;
    return encode(dn);
}

uint32_t Field::sub_i(uint32_t a, uint32_t b) const { return add_i(a, neg_i(b)); }

uint32_t Field::mul_i(uint32_t a, uint32_t b) const {
    if (has_tables_) return mul_table_[static_cast<size_t>(a) * q_ + b];
    return mul_slow(a, b);
}

uint32_t Field::pow_i(uint32_t a, uint64_t e) const {
    uint32_t base = a;
    uint32_t result = one().index();
    while (e > 0) {
        if (e & 1) result = has_tables_ ? mul_table_[static_cast<size_t>(result) * q_ + base] : mul_slow(result, base);
        base = has_tables_ ? mul_table_[static_cast<size_t>(base) * q_ + base] : mul_slow(base, base);
        e >>= 1;
    }
    return result;
}

uint32_t Field::inv_i(uint32_t a) const {
    if (a == 0) throw std::domain_error("division by zero in F_" + std::to_string(q_));
    if (has_tables_) return inv_table_[a];
    return pow_i(a, q_ - 2);
}

uint32_t Field::trace_i(uint32_t a) const { return trace_table_[a]; }

FieldElement Field::one() const {
    uint32_t digits[16] = {0};
    digits[0] = 1;
    return FieldElement(this, encode(digits));
}

FieldElement Field::element(uint64_t idx) const {
    if (idx >= q_) throw std::invalid_argument("element rank out of range");
    return FieldElement(this, static_cast<uint32_t>(idx));
}

FieldElement Field::from_int(int64_t v) const {
    int64_t r = v % static_cast<int64_t>(p_);
    if (r < 0) r += p_;
    uint32_t digits[16] = {0};
    digits[0] = static_cast<uint32_t>(r);
    return FieldElement(this, encode(digits));
}

std::vector<FieldElement> Field::elements() const {
    std::vector<FieldElement> out;
    out.reserve(q_);
    for (uint64_t i = 0; i < q_; ++i) out.push_back(FieldElement(this, static_cast<uint32_t>(i)));
    return out;
}

uint32_t Field::trace(const FieldElement& a) const { return trace_table_[a.index()]; }

Complex Field::character(const FieldElement& a) const { return char_table_[a.index()]; }

bool Field::is_square(const FieldElement& a) const {
    if (a.is_zero()) return true;
    return pow_i(a.index(), (q_ - 1) / 2) == one().index();
}

std::string Field::modulus_string() const {
    std::string out;
    for (int j = static_cast<int>(modulus_.size()) - 1; j >= 0; --j) {
        const uint32_t c = modulus_[j];
        if (c == 0) continue;
        if (!out.empty()) out += " + ";
        if (j == 0) {
            out += std::to_string(c);
        } else {
            if (c != 1) out += std::to_string(c) + "*";
            out += j == 1 ? "x" : "x^" + std::to_string(j);
        }
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------

namespace {

const Field& common_field(const FieldElement& a, const FieldElement& b) {
    const Field& fa = a.field();
    const Field& fb = b.field();
    if (&fa != &fb && !fa.same_spec(fb)) throw FieldMismatchError("operands from different fields");
    return fa;
}

}  // namespace

const Field& FieldElement::field() const {
    if (!field_) throw std::logic_error("uninitialized field element");
    return *field_;
}

std::vector<uint32_t> FieldElement::coefficients() const {
    const Field& f = field();
    std::vector<uint32_t> out(f.degree());
    uint64_t place = 1;
    for (uint32_t j = 1; j < f.degree(); ++j) place *= f.characteristic();
    uint64_t rest = idx_;
    for (uint32_t j = 0; j < f.degree(); ++j) {
        out[j] = static_cast<uint32_t>(rest / place);
        rest %= place;
        if (place > 1) place /= f.characteristic();
    }
    return out;
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
    const Field& f = common_field(*this, rhs);
    return f.element(f.add_i(idx_, rhs.idx_));
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
    const Field& f = common_field(*this, rhs);
    return f.element(f.sub_i(idx_, rhs.idx_));
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
    const Field& f = common_field(*this, rhs);
    return f.element(f.mul_i(idx_, rhs.idx_));
}

FieldElement FieldElement::operator-() const {
    const Field& f = field();
    return f.element(f.neg_i(idx_));
}

FieldElement FieldElement::inv() const {
    const Field& f = field();
    return f.element(f.inv_i(idx_));
}

FieldElement FieldElement::pow(int64_t e) const {
    const Field& f = field();
    if (e >= 0) return f.element(f.pow_i(idx_, static_cast<uint64_t>(e)));
    return f.element(f.pow_i(f.inv_i(idx_), static_cast<uint64_t>(-e)));
}

bool FieldElement::operator==(const FieldElement& rhs) const {
    if (field_ == rhs.field_) return idx_ == rhs.idx_;
    if (!field_ || !rhs.field_) return false;
    return field_->same_spec(*rhs.field_) && idx_ == rhs.idx_;
}

// ---------------------------------------------------------------------------

FieldElement dot(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    if (a.empty()) throw std::invalid_argument("dot: empty vectors");
    const Field& f = common_field(a[0], b[0]);
    uint32_t acc = 0;
    for (size_t j = 0; j < a.size(); ++j) {
        common_field(a[j], b[j]);
        acc = f.add_i(acc, f.mul_i(a[j].index(), b[j].index()));
    }
    return f.element(acc);
}

FVector add(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    FVector out;
    out.reserve(a.size());
    for (size_t j = 0; j < a.size(); ++j) out.push_back(a[j] + b[j]);
    return out;
}

FVector sub(const FVector& a, const FVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    FVector out;
    out.reserve(a.size());
    for (size_t j = 0; j < a.size(); ++j) out.push_back(a[j] - b[j]);
    return out;
}

FVector neg(const FVector& a) {
    FVector out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(-x);
    return out;
}

uint64_t rank_of(const FVector& v) {
    if (v.empty()) return 0;
    const uint64_t q = v[0].field().order();
    uint64_t r = 0;
    for (const auto& x : v) r = r * q + x.index();
    return r;
}

FVector vector_from_rank(const FieldPtr& field, int len, uint64_t rank) {
    const uint64_t q = field->order();
    FVector out(static_cast<size_t>(len));
    for (int j = len - 1; j >= 0; --j) {
        out[static_cast<size_t>(j)] = field->element(rank % q);
        rank /= q;
    }
    return out;
}

}  // namespace parafield
