#include "ccmp/lpkit/backend.hpp"

#include "ccmp/errors.hpp"

namespace ccmp::lpkit {

const BackendPort& default_backend() {
  static const SimplexBackend backend;
  return backend;
}

void require_subproblem_capable(const BackendPort& backend) {
  const auto caps = backend.capabilities();
  if (!caps.lp || !caps.rays)
    throw PreconditionViolated("backend " + backend.name() +
                               " cannot return rays for subproblems");
}

}  // namespace ccmp::lpkit
