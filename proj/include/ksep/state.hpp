#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ksep {

using Complex = std::complex<double>;

/// 1-based row/column index into a d^N x d^N density matrix.
using Index = std::uint64_t;

/// Absolute tolerance used for every equality invariant on states.
inline constexpr double kStateTolerance = 1e-12;

/// Thrown when a matrix violates a density-matrix invariant (trace, Hermiticity,
/// negative diagonal).
class MalformedState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Computational basis label of N subsystems of local dimension d. Subsystem 1
/// is the most significant digit, so for qubits "bit position p" counts from the
/// last subsystem.
class BasisLabel {
public:
    BasisLabel(std::vector<int> digits, int d);

    static BasisLabel from_index(Index one_based, int n, int d);
    /// Parses a digit string such as "0110" (digits 0-9 only).
    static BasisLabel parse(const std::string& digits, int d);

    [[nodiscard]] Index one_based_index() const;
    [[nodiscard]] int n() const { return static_cast<int>(digits_.size()); }
    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] std::span<const int> digits() const { return digits_; }
    [[nodiscard]] int operator[](std::size_t i) const { return digits_[i]; }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

private:
    std::vector<int> digits_;
    int d_;
};

/// d^n, throwing std::invalid_argument when it does not fit in an Index.
Index basis_dimension(int n, int d);

struct Amplitude {
    BasisLabel label;
    Complex value;
};

/// Sparse normalized pure state. Amplitudes are kept sorted by basis index.
class PureState {
public:
    PureState(int n, int d, std::vector<Amplitude> amplitudes);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] Index dim() const { return basis_dimension(n_, d_); }
    [[nodiscard]] const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    [[nodiscard]] std::size_t support_size() const { return amplitudes_.size(); }
    [[nodiscard]] Complex amplitude(const BasisLabel& label) const;

private:
    int n_;
    int d_;
    std::vector<Amplitude> amplitudes_;
};

/// Sparse Hermitian unit-trace matrix with 1-based indexing. Only the upper
/// triangle (row <= col) is stored; lower-triangle reads return the conjugate.
class DensityMatrix {
public:
    struct Entry {
        Index row;
        Index col;
        Complex value;
    };

    /// Entries may be given for either triangle; (r, c) and (c, r) must not both
    /// appear. Throws MalformedState on a non-real diagonal or trace != 1.
    DensityMatrix(int n, int d, std::span<const Entry> entries);

    /// Builds from a dense row-major d^n x d^n buffer, keeping nonzero entries of
    /// the upper triangle. Throws MalformedState if the buffer is not Hermitian.
    static DensityMatrix from_dense(int n, int d, std::span<const Complex> dense);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] Index dim() const { return dim_; }

    /// Stored value, its conjugate for lower-triangle reads, or zero.
    [[nodiscard]] Complex element(Index row, Index col) const;
    [[nodiscard]] double diagonal(Index i) const { return element(i, i).real(); }
    [[nodiscard]] double trace() const;

    /// Upper-triangle entries in ascending (row, col) order.
    [[nodiscard]] std::vector<Entry> upper_entries() const;
    [[nodiscard]] std::size_t stored_count() const { return entries_.size(); }

    [[nodiscard]] std::vector<Complex> to_dense() const;

private:
    DensityMatrix(int n, int d);
    void insert(Index row, Index col, Complex value);
    void validate() const;
    [[nodiscard]] std::uint64_t key(Index row, Index col) const {
        return (row - 1) * dim_ + (col - 1);
    }

    int n_;
    int d_;
    Index dim_;
    std::unordered_map<std::uint64_t, Complex> entries_;
};

/// |D_m^n>: equal superposition of all n-qubit labels with m ones.
PureState dicke_state(int n, int m);

/// |W_n^n>: equal superposition of all permutations of the digits 0..n-1 (d = n).
PureState qudit_w_state(int n);

/// Anti-W state, taken as the Dicke state with n-1 excitations.
PureState anti_w_state(int n);

/// |psi><psi|.
DensityMatrix projector(const PureState& psi);

/// (1-p)|psi><psi| + p I/d^n.
DensityMatrix white_noise_mixture(const PureState& psi, double p);

/// Convex combination sum_i w_i rho_i of matrices with equal shape. Weights must be
/// non-negative and sum to 1.
DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights);

}  // namespace ksep
