/**
 * Client-side mirror of the server permission matrix, used only to gate
 * controls in the interface. The server re-checks every command.
 */

import type { Role } from "./state.js";
import type { CommandType } from "./protocol.js";

const CHAIR_COMMANDS = new Set<CommandType>([
  "open_table",
  "set_audience",
  "close_table",
  "grant_turn",
  "promote_note",
  "post_note",
  "move_note",
  "post_chat",
]);

const PARTICIPANT_COMMANDS = new Set<CommandType>([
  "post_note",
  "move_note",
  "post_chat",
  "request_turn",
]);

export function allows(role: Role, command: CommandType, table: number | null): boolean {
  switch (role.kind) {
    case "organizer":
      return true;
    case "chair":
      return CHAIR_COMMANDS.has(command) && table === role.table;
    case "participant":
      if (command === "switch_to_public") return true;
      return PARTICIPANT_COMMANDS.has(command) && table === role.table;
    default:
      return command === "join_table";
  }
}

/** Commands that mutate session content; the join/leave role switches are
 * navigation, not content mutation. */
export const MUTATION_COMMANDS: CommandType[] = [
  "assign_chair",
  "open_table",
  "set_audience",
  "close_table",
  "post_note",
  "move_note",
  "post_chat",
  "request_turn",
  "grant_turn",
  "promote_note",
  "rotate",
  "archive_session",
];
