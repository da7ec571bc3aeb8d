#pragma once

#include <stdexcept>
#include <string>

namespace funbench {

/// Base class for every error raised by the library. The CLI maps the
/// category to an exit code: data problems -> 2, numeric failures -> 3.
class Error : public std::runtime_error {
public:
    enum class Category { Usage, Data, Numeric };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

#define FUNBENCH_DEFINE_ERROR(Name, Cat)                                   \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what)                             \
            : Error(Category::Cat, #Name ": " + what) {}                   \
    };

FUNBENCH_DEFINE_ERROR(DimensionError, Data)
FUNBENCH_DEFINE_ERROR(EmptyInputError, Data)
FUNBENCH_DEFINE_ERROR(InvalidArgument, Usage)
FUNBENCH_DEFINE_ERROR(SchemaError, Data)
FUNBENCH_DEFINE_ERROR(ParseError, Data)
FUNBENCH_DEFINE_ERROR(DataError, Data)
FUNBENCH_DEFINE_ERROR(SizeError, Data)
FUNBENCH_DEFINE_ERROR(DegenerateLabelsError, Data)
FUNBENCH_DEFINE_ERROR(DegenerateDistanceError, Data)
FUNBENCH_DEFINE_ERROR(InsufficientDataError, Data)
FUNBENCH_DEFINE_ERROR(IllPosedError, Numeric)
FUNBENCH_DEFINE_ERROR(NumericalError, Numeric)
FUNBENCH_DEFINE_ERROR(SingularDesignError, Numeric)
FUNBENCH_DEFINE_ERROR(TrainingDivergedError, Numeric)
FUNBENCH_DEFINE_ERROR(MetricError, Numeric)
FUNBENCH_DEFINE_ERROR(IoError, Data)

#undef FUNBENCH_DEFINE_ERROR

}  // namespace funbench
