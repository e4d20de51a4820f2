#pragma once

#include "asrfix/context.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asrfix {

enum class DialogueState { Start, Searching, Selecting, Executing, Ended };

std::string to_string(DialogueState state);
std::optional<DialogueState> dialogue_state_from_string(const std::string& name);

/// Immutable snapshot of one session's dialogue state. presented_options is
/// non-empty only in Selecting; active_task is set only in Executing.
struct DialogueSnapshot {
    DialogueState state = DialogueState::Start;
    std::vector<std::string> presented_options;
    std::vector<std::string> system_suggestions;
    std::optional<std::string> active_task;
    bool pending_system_question = false;
    std::vector<std::string> command_vocabulary = default_command_vocabulary();

    static std::vector<std::string> default_command_vocabulary();
};

enum class IntentLabel { Search, Select, Command, Question, Exit, Chitchat, Other };

std::string to_string(IntentLabel label);
std::optional<IntentLabel> intent_from_string(const std::string& name);

struct Intent {
    IntentLabel label = IntentLabel::Other;
    double confidence = 0.0;
};

/// Pluggable intent classification boundary; the default is keyword rules.
class IntentClassifier {
public:
    virtual ~IntentClassifier() = default;
    virtual Intent classify(const std::string& utterance,
                            const DialogueSnapshot& snapshot) const = 0;
};

class RuleIntentClassifier : public IntentClassifier {
public:
    Intent classify(const std::string& utterance,
                    const DialogueSnapshot& snapshot) const override;
};

/// Likely user responses for the current state: suggestions at Start,
/// presented options plus unique partial matches plus ordinal selectors in
/// Selecting, the command vocabulary in Executing, nothing otherwise.
std::vector<ContextEntry> derive_narrow_context(const DialogueSnapshot& snapshot);

/// Correction trigger policy: fire when a narrow context exists or when a
/// search/select intent is plausible in the current state; never fire for a
/// question the system just asked, for out-of-scope intents without narrow
/// context, or in Executing for non-command intents.
bool should_trigger(const DialogueSnapshot& snapshot, const Intent& intent);

struct DialogueEvent {
    enum class Kind { UserSearch, ResultsPresented, UserSelect, Exit };
    Kind kind = Kind::UserSearch;
    std::vector<std::string> options; // ResultsPresented
    size_t selected_index = 0;        // UserSelect
    std::string task_id;              // UserSelect
};

/// Apply one event; throws StateError naming the edge when the transition is
/// not part of the dialogue graph.
DialogueSnapshot update_state(const DialogueSnapshot& snapshot, const DialogueEvent& event);

} // namespace asrfix
