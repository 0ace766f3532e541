#pragma once

#include <vector>

#include "distobs/design.hpp"
#include "distobs/network.hpp"

namespace distobs {

/// Per-mode blocks of the error system in the coordinates (z1, z2) = (Q e, V' e):
///
///     [z1']   [ quotient  0    ] [z1]
///     [z2'] = [ coupling  sub  ] [z2]
struct ReducedMatrices {
    Matrix quotient;  // blockdiag(Abar_i + Kbar_i Cbar_i); independent of mode and gain
    Matrix sub;       // restricted - g V'((I - S) x I)V
    Matrix coupling;  // V' closed_loop Q' - g V'((I - S) x I)Q'
};

/// M(p) = closed_loop - g P ((I_m - S(p)) x I_n).
Matrix mode_matrix(const ObserverDesign& design, const GraphFamily& family, double g, int p);

ReducedMatrices reduced_matrices(const ObserverDesign& design, const GraphFamily& family, double g,
                                 int p);

/// G(p) = V'((I_m - S(p)) x I_n)V. For strongly connected graphs of a jointly
/// observable plant, -G(p) is Hurwitz.
Matrix coupling_block(const ObserverDesign& design, const GraphFamily& family, int p);

/// Switched error system  e' = M(sigma(t)) e  for a fixed design, family and
/// gain. Per-mode matrices are built once at construction.
class ErrorModel {
public:
    ErrorModel(ObserverDesign design, GraphFamily family, double g);

    const ObserverDesign& design() const { return design_; }
    const GraphFamily& family() const { return family_; }
    double gain() const { return g_; }
    int mode_count() const { return static_cast<int>(family_.size()); }
    int dim() const { return static_cast<int>(design_.closed_loop.rows()); }

    const Matrix& mode(int p) const { return modes_.at(static_cast<std::size_t>(p)); }
    const ReducedMatrices& reduced(int p) const { return reduced_.at(static_cast<std::size_t>(p)); }
    /// A_V(p) for every mode, in family order.
    std::vector<Matrix> sub_matrices() const;

    /// Same design and family, different gain.
    ErrorModel with_gain(double g) const { return ErrorModel(design_, family_, g); }

    /// Largest ||upper-right block of H M(p) H'|| over all modes.
    double max_block_residual() const;
    double max_mode_norm() const;

private:
    ObserverDesign design_;
    GraphFamily family_;
    double g_;
    std::vector<Matrix> modes_;
    std::vector<ReducedMatrices> reduced_;
};

struct DoublyStochasticCertificate {
    std::vector<bool> per_mode;
    /// Largest eigenvalue of (lambda I + A_V(p)) + (lambda I + A_V(p))' per mode.
    std::vector<double> max_eigenvalue;
    bool certified() const;
};

/// Common quadratic Lyapunov test z'z at rate lambda for arbitrary switching.
/// Requires every S(p) to be doubly stochastic (NotDoublyStochastic otherwise).
DoublyStochasticCertificate doubly_stochastic_certificate(const ObserverDesign& design,
                                                          const GraphFamily& family, double g,
                                                          double lambda);

/// Smallest g above which doubly_stochastic_certificate holds for every mode:
/// the largest generalized eigenvalue of (2 lambda I + A~ + A~', V'((2I - S - S') x I)V).
/// +inf when some generalized Laplacian block is singular.
double doubly_stochastic_gain_threshold(const ObserverDesign& design, const GraphFamily& family,
                                        double lambda);

}  // namespace distobs
