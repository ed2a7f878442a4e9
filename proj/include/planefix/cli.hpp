#pragma once

namespace planefix::cli {

// Exit codes: 0 ok, 1 usage, 2 validation error, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace planefix::cli
