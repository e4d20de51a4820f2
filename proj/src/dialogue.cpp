#include "asrfix/dialogue.hpp"

#include "asrfix/augment.hpp"
#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include <algorithm>
#include <array>

namespace asrfix {

std::string to_string(DialogueState state) {
    switch (state) {
        case DialogueState::Start: return "start";
        case DialogueState::Searching: return "searching";
        case DialogueState::Selecting: return "selecting";
        case DialogueState::Executing: return "executing";
        case DialogueState::Ended: return "ended";
    }
    return "unknown";
}

std::optional<DialogueState> dialogue_state_from_string(const std::string& name) {
    for (auto s : {DialogueState::Start, DialogueState::Searching, DialogueState::Selecting,
                   DialogueState::Executing, DialogueState::Ended})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::string to_string(IntentLabel label) {
    switch (label) {
        case IntentLabel::Search: return "search";
        case IntentLabel::Select: return "select";
        case IntentLabel::Command: return "command";
        case IntentLabel::Question: return "question";
        case IntentLabel::Exit: return "exit";
        case IntentLabel::Chitchat: return "chitchat";
        case IntentLabel::Other: return "other";
    }
    return "other";
}

std::optional<IntentLabel> intent_from_string(const std::string& name) {
    for (auto l : {IntentLabel::Search, IntentLabel::Select, IntentLabel::Command,
                   IntentLabel::Question, IntentLabel::Exit, IntentLabel::Chitchat,
                   IntentLabel::Other})
        if (to_string(l) == name) return l;
    return std::nullopt;
}

std::vector<std::string> DialogueSnapshot::default_command_vocabulary() {
    return {"next", "go back", "start cooking", "start another task", "repeat", "finish"};
}

namespace {

const std::array<const char*, 10> kOrdinalWords = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

} // namespace

std::vector<ContextEntry> derive_narrow_context(const DialogueSnapshot& snapshot) {
    std::vector<ContextEntry> entries;
    switch (snapshot.state) {
        case DialogueState::Start:
            for (const auto& s : snapshot.system_suggestions) entries.push_back({s, s, ""});
            break;
        case DialogueState::Selecting: {
            const auto& options = snapshot.presented_options;
            if (options.empty()) break;
            for (const auto& o : options) entries.push_back({o, o, ""});
            for (auto& partial : expand_partial_matches(options))
                entries.push_back(std::move(partial));
            for (size_t i = 0; i < options.size() && i < kOrdinalWords.size(); ++i)
                entries.push_back({std::string("option ") + kOrdinalWords[i], options[i], ""});
            break;
        }
        case DialogueState::Executing:
            for (const auto& c : snapshot.command_vocabulary) entries.push_back({c, c, ""});
            break;
        case DialogueState::Searching:
        case DialogueState::Ended:
            break;
    }
    return entries;
}

bool should_trigger(const DialogueSnapshot& snapshot, const Intent& intent) {
    if (snapshot.pending_system_question && intent.label == IntentLabel::Question)
        return false;
    if (snapshot.state == DialogueState::Executing && intent.label != IntentLabel::Command)
        return false;

    bool has_narrow = !derive_narrow_context(snapshot).empty();
    if (!has_narrow && (intent.label == IntentLabel::Question ||
                        intent.label == IntentLabel::Exit ||
                        intent.label == IntentLabel::Chitchat))
        return false;

    bool plausible_intent =
        (intent.label == IntentLabel::Search || intent.label == IntentLabel::Select) &&
        (snapshot.state == DialogueState::Searching ||
         snapshot.state == DialogueState::Selecting);
    return has_narrow || plausible_intent;
}

DialogueSnapshot update_state(const DialogueSnapshot& snapshot, const DialogueEvent& event) {
    DialogueSnapshot next = snapshot;
    auto illegal = [&](const char* what) {
        throw StateError(std::string("illegal transition: ") + to_string(snapshot.state) +
                         " + " + what);
    };

    switch (event.kind) {
        case DialogueEvent::Kind::Exit:
            next.state = DialogueState::Ended;
            next.presented_options.clear();
            next.active_task.reset();
            next.pending_system_question = false;
            break;
        case DialogueEvent::Kind::UserSearch:
            // a new search is legal from the start, mid-search, and while
            // executing ("start another task")
            if (snapshot.state == DialogueState::Ended) illegal("search");
            next.state = DialogueState::Searching;
            next.presented_options.clear();
            next.active_task.reset();
            break;
        case DialogueEvent::Kind::ResultsPresented:
            if (snapshot.state != DialogueState::Searching) illegal("results-presented");
            if (event.options.empty())
                throw StateError("results-presented event carries no options");
            next.state = DialogueState::Selecting;
            next.presented_options = event.options;
            break;
        case DialogueEvent::Kind::UserSelect:
            if (snapshot.state != DialogueState::Selecting) illegal("select");
            if (event.selected_index >= snapshot.presented_options.size())
                throw StateError("selected option index out of range");
            next.state = DialogueState::Executing;
            next.active_task = event.task_id.empty()
                                   ? snapshot.presented_options[event.selected_index]
                                   : event.task_id;
            next.presented_options.clear();
            break;
    }
    return next;
}

Intent RuleIntentClassifier::classify(const std::string& utterance,
                                      const DialogueSnapshot& snapshot) const {
    std::string norm = normalize_text(utterance);
    auto tokens = tokenize(utterance);
    if (tokens.empty()) return {IntentLabel::Other, 0.2};

    auto starts_with = [&](const char* prefix) { return norm.rfind(prefix, 0) == 0; };
    auto has_token = [&](const char* word) {
        return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
    };

    if (norm == "alexa cancel" || starts_with("open ") || norm == "exit" || norm == "quit" ||
        norm == "stop" || norm == "goodbye")
        return {IntentLabel::Exit, 0.9};

    for (const auto& cmd : snapshot.command_vocabulary)
        if (norm == normalize_text(cmd)) return {IntentLabel::Command, 0.9};

    if (!snapshot.presented_options.empty()) {
        for (const auto& o : snapshot.presented_options)
            if (norm == normalize_text(o)) return {IntentLabel::Select, 0.9};
        for (const char* ordinal : kOrdinalWords)
            if (has_token(ordinal)) return {IntentLabel::Select, 0.7};
        if (starts_with("option ") || has_token("first") || has_token("second") ||
            has_token("third"))
            return {IntentLabel::Select, 0.7};
    }

    if (snapshot.pending_system_question &&
        (norm == "yes" || norm == "no" || starts_with("what") || starts_with("why")))
        return {IntentLabel::Question, 0.7};

    if (starts_with("tell me a joke") || starts_with("tell me a dad joke"))
        return {IntentLabel::Chitchat, 0.8};

    if (starts_with("how ") || starts_with("recipe") || starts_with("recipes") ||
        starts_with("make ") || starts_with("search ") || starts_with("find ") ||
        has_token("recipe"))
        return {IntentLabel::Search, 0.8};

    if (starts_with("what") || starts_with("why") || starts_with("when"))
        return {IntentLabel::Question, 0.6};

    return {IntentLabel::Other, 0.3};
}

} // namespace asrfix
