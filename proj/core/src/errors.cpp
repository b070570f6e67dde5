#include "cardmso/errors.hpp"

namespace cardmso {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                 message),
      line_(line),
      column_(column) {}

CoverExceedsBudget::CoverExceedsBudget(std::size_t k_max)
    : BudgetExceeded("minimum vertex cover exceeds k_max = " + std::to_string(k_max)),
      k_max_(k_max) {}

}  // namespace cardmso
