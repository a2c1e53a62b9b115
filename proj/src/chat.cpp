#include "termweaver/chat.hpp"

#include "termweaver/errors.hpp"

namespace termweaver {

std::string role_name(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

Role role_from_name(const std::string& name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw ValidationError("unknown chat role: " + name);
}

nlohmann::ordered_json messages_to_json(const std::vector<ChatMessage>& messages) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& m : messages)
    arr.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  return arr;
}

std::vector<ChatMessage> messages_from_json(const nlohmann::json& arr) {
  std::vector<ChatMessage> out;
  for (const auto& m : arr)
    out.push_back({role_from_name(m.at("role").get<std::string>()),
                   m.at("content").get<std::string>()});
  return out;
}

}  // namespace termweaver
