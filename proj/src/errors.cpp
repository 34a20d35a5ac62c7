#include "ripca/errors.hpp"

#include <sstream>

namespace ripca {

AtAnchor::AtAnchor(std::vector<int> indices)
    : Error([&] {
        std::ostringstream os;
        os << "operation undefined at anchor point; anchored indices:";
        for (int i : indices) os << ' ' << i;
        return os.str();
      }()),
      indices_(std::move(indices)) {}

ParseError::ParseError(int line, int column, const std::string& token)
    : Error("parse error at line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": '" + token + "'"),
      line_(line),
      column_(column) {}

}  // namespace ripca
