#pragma once

#include <stdexcept>
#include <string>

namespace dqm {

// Base of every error raised by the library. `kind()` is the stable name
// used in CLI error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define DQM_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name, what) {}  \
    }

DQM_DEFINE_ERROR(DomainError);
DQM_DEFINE_ERROR(QuadratureError);
DQM_DEFINE_ERROR(OverflowError);
DQM_DEFINE_ERROR(DivergenceError);
DQM_DEFINE_ERROR(ParamError);
DQM_DEFINE_ERROR(ValidationError);
DQM_DEFINE_ERROR(SingularPointError);
DQM_DEFINE_ERROR(BranchError);
DQM_DEFINE_ERROR(RangeError);
DQM_DEFINE_ERROR(DegenerateError);
DQM_DEFINE_ERROR(InconclusiveError);
DQM_DEFINE_ERROR(CutError);

#undef DQM_DEFINE_ERROR

// Evaluation too close to a pole (or zero) of the quantum dilogarithm.
// The lattice point is i*((2 n1 - 1) gamma + (2 n2 - 1) pi) for a pole and
// its negative for a zero.
class PoleError : public Error {
public:
    PoleError(const std::string& what, int n1, int n2, bool is_pole)
        : Error("PoleError", what), n1_(n1), n2_(n2), is_pole_(is_pole) {}
    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return n2_; }
    bool is_pole() const noexcept { return is_pole_; }

private:
    int n1_, n2_;
    bool is_pole_;
};

}  // namespace dqm
