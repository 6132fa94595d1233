#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace parafield {

using Complex = std::complex<double>;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Operands from two different fields were mixed.
struct FieldMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A requested enumeration or field order exceeds the configured cap.
struct SizeCapError : std::length_error {
    using std::length_error::length_error;
};

/// A redundant internal cross-check disagreed; indicates a bug, not bad input.
struct InternalCheckError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Element of F_{p^m}, identified by its rank in the canonical enumeration.
/// The rank encodes the coefficient vector (c_0, ..., c_{m-1}) of the residue
/// c_0 + c_1 x + ... modulo the field's irreducible polynomial, ordered
/// lexicographically, so rank 0 is always zero.
class FieldElement {
public:
    FieldElement() = default;

    uint32_t index() const { return idx_; }
    const Field& field() const;
    bool valid() const { return field_ != nullptr; }
    bool is_zero() const { return idx_ == 0; }

    /// Residues mod p, constant term first (length m).
    std::vector<uint32_t> coefficients() const;

    FieldElement operator+(const FieldElement& rhs) const;
    FieldElement operator-(const FieldElement& rhs) const;
    FieldElement operator*(const FieldElement& rhs) const;
    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement pow(int64_t e) const;

    bool operator==(const FieldElement& rhs) const;
    bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }

private:
    friend class Field;
    FieldElement(const Field* f, uint32_t idx) : field_(f), idx_(idx) {}

    const Field* field_ = nullptr;
    uint32_t idx_ = 0;
};

/// F_{p^m} for an odd prime p, realized as Z_p[x] modulo the lexicographically
/// smallest monic irreducible polynomial of degree m (the polynomial x itself
/// stands in for m = 1). Immutable after construction; all operations are pure
/// and the internal tables may be shared freely across threads.
class Field : public std::enable_shared_from_this<Field> {
public:
    /// Builds the field, searching for the modulus. Deterministic.
    /// Throws std::invalid_argument for composite/even p or m < 1, and
    /// SizeCapError when p^m exceeds `cap` (default from PARAFIELD_CAP env
    /// var, else 2^16).
    static FieldPtr make(uint32_t p, uint32_t m = 1, uint64_t cap = 0);

    uint32_t characteristic() const { return p_; }
    uint32_t degree() const { return m_; }
    uint64_t order() const { return q_; }

    /// Modulus coefficients, constant term first, length m + 1, monic.
    const std::vector<uint32_t>& modulus() const { return modulus_; }
    std::string modulus_string() const;

    FieldElement zero() const { return element(0); }
    FieldElement one() const;
    FieldElement element(uint64_t idx) const;
    /// Embeds v mod p into the prime subfield.
    FieldElement from_int(int64_t v) const;

    /// All q elements in canonical order; index 0 is zero.
    std::vector<FieldElement> elements() const;

    /// Absolute trace to the prime subfield, as a residue in [0, p).
    uint32_t trace(const FieldElement& a) const;

    /// The additive character e(a) = exp(2*pi*i * trace(a) / p).
    Complex character(const FieldElement& a) const;

    /// True iff a is zero or a^((q-1)/2) = 1.
    bool is_square(const FieldElement& a) const;

    bool same_spec(const Field& other) const {
        return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
    }

    // Index-level arithmetic, used by the inner loops. All arguments must be
    // ranks below order().
    uint32_t add_i(uint32_t a, uint32_t b) const;
    uint32_t sub_i(uint32_t a, uint32_t b) const;
    uint32_t mul_i(uint32_t a, uint32_t b) const;
    uint32_t neg_i(uint32_t a) const;
    uint32_t inv_i(uint32_t a) const;
    uint32_t pow_i(uint32_t a, uint64_t e) const;
    uint32_t trace_i(uint32_t a) const;
    const Complex& character_i(uint32_t a) const { return char_table_[a]; }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(uint32_t p, uint32_t m, std::vector<uint32_t> modulus);

    void decode(uint32_t idx, uint32_t* digits) const;
    uint32_t encode(const uint32_t* digits) const;
    uint32_t mul_slow(uint32_t a, uint32_t b) const;

    uint32_t p_ = 0;
    uint32_t m_ = 0;
    uint64_t q_ = 0;
    std::vector<uint32_t> modulus_;
    std::vector<uint64_t> place_;  // place_[j] = p^(m-1-j), digit weights

    // q*q tables built for small fields; larger ones fall back to direct
    // polynomial arithmetic.
    bool has_tables_ = false;
    std::vector<uint16_t> add_table_;
    std::vector<uint16_t> mul_table_;
    std::vector<uint32_t> neg_table_;
    std::vector<uint32_t> inv_table_;
    std::vector<uint16_t> trace_table_;
    std::vector<Complex> char_table_;
};

/// Default field-order cap: PARAFIELD_CAP from the environment, else 2^16.
uint64_t field_order_cap();

/// Construction entry point mirroring Field::make.
inline FieldPtr make_field(uint32_t p, uint32_t m = 1, uint64_t cap = 0) { return Field::make(p, m, cap); }

// ---------------------------------------------------------------------------
// Vectors over F. These are thin helpers; hot loops work with raw ranks.

using FVector = std::vector<FieldElement>;

FieldElement dot(const FVector& a, const FVector& b);
FVector add(const FVector& a, const FVector& b);
FVector sub(const FVector& a, const FVector& b);
FVector neg(const FVector& a);

/// Canonical rank of a length-len vector in F^len (first coordinate most
/// significant), matching the lexicographic element order.
uint64_t rank_of(const FVector& v);
FVector vector_from_rank(const FieldPtr& field, int len, uint64_t rank);

}  // namespace parafield
