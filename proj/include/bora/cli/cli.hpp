#pragma once

namespace bora::cli {

// Exit codes: 0 success, 1 config error, 2 environment/credential error,
// 3 runtime abort.
int cli_main(int argc, const char* const* argv);

}  // namespace bora::cli
