#pragma once

#include <map>
#include <string>
#include <string_view>

namespace factreward {

enum class JudgeTask { Extract, Verify, Assess };

std::string_view to_string(JudgeTask task);

/// Slot values keyed by name: {response} for Extract, {materials, statement}
/// for Verify, {question, response, statement} for Assess.
using PromptSlots = std::map<std::string, std::string, std::less<>>;

/// The raw template text, with `{slot}` placeholders.
std::string_view prompt_template(JudgeTask task);

/// Substitutes every slot of the task's template. Throws MissingSlot when a
/// required slot is absent or empty.
std::string render_prompt(JudgeTask task, const PromptSlots& slots);

}  // namespace factreward
