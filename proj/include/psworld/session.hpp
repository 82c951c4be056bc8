#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psworld/diagnostic.hpp"
#include "psworld/model.hpp"

namespace psworld
{

struct HistoryEntry
{
  std::string command;
  std::string inverse;  // human-readable description of what `undo` restores
  WorldModel before;
};

/// Interactive framing session. Commands that mutate the model are recorded
/// with the model they replaced; queries are not recorded.
class Session
{
public:
  Session() = default;
  explicit Session(WorldModel initial);

  /// Runs one complete command and returns its printed output. Errors are
  /// reported in the output; the session always continues.
  std::string execute(const std::string & command);

  /// Feeds one input line. Lines are buffered until braces balance, so a
  /// multi-line `entity ... { ... }` block is one command.
  std::string feed(const std::string & line);

  [[nodiscard]] bool pending() const noexcept { return !buffer_.empty(); }
  [[nodiscard]] const WorldModel & model() const noexcept { return model_; }
  [[nodiscard]] const WorldModel & initial() const noexcept { return initial_; }
  [[nodiscard]] const std::vector<HistoryEntry> & history() const noexcept { return history_; }

  /// Re-applies every recorded mutation to a fresh session over `initial`.
  [[nodiscard]] static WorldModel replay(const WorldModel & initial, const std::vector<HistoryEntry> & history);

  [[nodiscard]] static std::string usage();

private:
  std::string mutate(const std::string & command, const std::string & block_text, const std::string & inverse);

  WorldModel initial_;
  WorldModel model_;
  std::vector<HistoryEntry> history_;
  std::optional<ContextId> last_context_;
  std::string buffer_;
  int depth_ = 0;
};

}  // namespace psworld
