#include "whichpath/error.hpp"

namespace whichpath {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace whichpath
