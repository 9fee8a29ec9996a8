#pragma once

#include <stdexcept>
#include <string>

namespace nlf {

// Base class for all engine errors. `kind()` is a stable machine-readable tag
// used by the CLI to pick exit codes and emit error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& msg)
        : Error("SyntaxError", msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownSymbol : public Error {
public:
    explicit UnknownSymbol(const std::string& name)
        : Error("UnknownSymbol", "unknown symbol '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};

class DegenerateHessian : public Error {
public:
    DegenerateHessian(double det, double cond)
        : Error("DegenerateHessian",
                "degenerate metric block: det=" + std::to_string(det) +
                    ", cond=" + std::to_string(cond)),
          det_(det), cond_(cond) {}
    double det() const noexcept { return det_; }
    double cond() const noexcept { return cond_; }

private:
    double det_;
    double cond_;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error("DimensionMismatch", msg) {}
};

class SingularVBlock : public Error {
public:
    explicit SingularVBlock(const std::string& msg) : Error("SingularVBlock", msg) {}
};

class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(const std::string& msg) : Error("NotPositiveDefinite", msg) {}
};

class DimensionTooLarge : public Error {
public:
    explicit DimensionTooLarge(const std::string& msg) : Error("DimensionTooLarge", msg) {}
};

class PatchTooSmall : public Error {
public:
    explicit PatchTooSmall(const std::string& msg) : Error("PatchTooSmall", msg) {}
};

class FormMismatch : public Error {
public:
    explicit FormMismatch(const std::string& msg) : Error("FormMismatch", msg) {}
};

class ShootingDiverged : public Error {
public:
    ShootingDiverged(int iterations, double residual)
        : Error("ShootingDiverged",
                "geodesic shooting did not converge after " + std::to_string(iterations) +
                    " iterations (residual " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class SolverStalled : public Error {
public:
    SolverStalled(int iterations, double gap)
        : Error("SolverStalled",
                "distance solver stalled after " + std::to_string(iterations) +
                    " iterations (gap estimate " + std::to_string(gap) + ")"),
          iterations_(iterations), gap_(gap) {}
    int iterations() const noexcept { return iterations_; }
    double gap() const noexcept { return gap_; }

private:
    int iterations_;
    double gap_;
};

class DisconnectedLattice : public Error {
public:
    explicit DisconnectedLattice(const std::string& msg) : Error("DisconnectedLattice", msg) {}
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error("InvalidInput", msg) {}
};

} // namespace nlf
