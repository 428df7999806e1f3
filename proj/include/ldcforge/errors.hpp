#pragma once

#include <stdexcept>
#include <string>

namespace ldcforge {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A supplied or constructed modulus polynomial is reducible or malformed.
struct IrreducibleViolation : Error { using Error::Error; };

/// Multiplicative inverse of zero requested.
struct DivisionByZero : Error { using Error::Error; };

/// Arithmetic attempted between elements of different fields.
struct FieldMismatch : Error { using Error::Error; };

/// Requested multiplicative order does not divide the group order.
struct OrderUnsupported : Error { using Error::Error; };

/// Factoring 2^t - 1 for an order computation exceeded its time budget.
struct OrderBudgetExceeded : Error { using Error::Error; };

/// Modulus violates a precondition (even, prime power, out of range).
struct InvalidModulus : Error { using Error::Error; };

/// Integer factorization exceeded its time budget.
struct FactorBudgetExceeded : Error { using Error::Error; };

/// CRT residues conflict or moduli are not pairwise coprime.
struct CrtConflict : Error { using Error::Error; };

/// Coset ratio requested for a coset containing a multiple of a prime factor.
struct ForbiddenCoset : Error { using Error::Error; };

/// A search or audit exceeded its configured budget or scale cap.
struct BudgetExceeded : Error { using Error::Error; };

/// A reported collision failed definition-level re-verification.
struct CertificateInconsistent : Error { using Error::Error; };

/// Message length does not match the code dimension.
struct MessageLengthMismatch : Error { using Error::Error; };

/// Index outside the valid range.
struct IndexOutOfRange : Error { using Error::Error; };

/// Auxiliary randomness blob malformed or out of range.
struct AuxInvalid : Error { using Error::Error; };

/// Answers inconsistent with the reconstruction rule.
struct ReconstructionError : Error { using Error::Error; };

/// Polynomial representation not supported by the requested operation.
struct RepresentationUnsupported : Error { using Error::Error; };

/// Composition inputs violate the coprimality or verification contract.
struct CompositionInvalid : Error { using Error::Error; };

/// Planner inventory cannot cover the requested number of prime factors.
struct InventoryExhausted : Error { using Error::Error; };

/// Internal invariant violated; indicates a library bug.
struct InternalError : Error { using Error::Error; };

}  // namespace ldcforge
