#pragma once

#include <stdexcept>
#include <string>

namespace ovs {

/// Root of every error raised by the library.
///
/// The category decides how the command-line front end maps a failure to an
/// exit code: engine failures (budgets, internal invariants) and contract
/// violations (a precondition on the mathematical input failed) are kept
/// apart.
class Error : public std::runtime_error {
public:
    enum class Category { Engine, Contract, Parse };

    Error(Category category, const std::string& kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), category_(category), kind_(kind) {}

    Category category() const noexcept { return category_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    Category category_;
    std::string kind_;
};

#define OVS_DEFINE_ERROR(Name, Cat)                                                      \
    class Name : public Error {                                                          \
    public:                                                                              \
        explicit Name(const std::string& what) : Error(Category::Cat, #Name, what) {}    \
    };

OVS_DEFINE_ERROR(UnassignedVariable, Engine)
OVS_DEFINE_ERROR(BudgetExceeded, Engine)
OVS_DEFINE_ERROR(EncodingDisagreement, Engine)
OVS_DEFINE_ERROR(InternalInvariantViolation, Engine)
OVS_DEFINE_ERROR(PostconditionFailed, Engine)
OVS_DEFINE_ERROR(NotASubspace, Engine)
OVS_DEFINE_ERROR(DimensionMismatch, Contract)
OVS_DEFINE_ERROR(NotAWedge, Contract)
OVS_DEFINE_ERROR(NotACone, Contract)
OVS_DEFINE_ERROR(NotPositiveElement, Contract)
OVS_DEFINE_ERROR(NotAnOrderIdeal, Contract)
OVS_DEFINE_ERROR(TargetNotArchimedean, Contract)
OVS_DEFINE_ERROR(MapNotPositive, Contract)
OVS_DEFINE_ERROR(KernelConditionFailed, Contract)
OVS_DEFINE_ERROR(NonUniqueSupremum, Contract)
OVS_DEFINE_ERROR(InvalidArgument, Contract)
OVS_DEFINE_ERROR(ParseError, Parse)

#undef OVS_DEFINE_ERROR

}  // namespace ovs
