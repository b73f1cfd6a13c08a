/**
 * Browser entry: ?session=<id>&user=<name>&server=<host:port>.
 * The token doubles as the user id in the server's dev auth mode.
 */

import { SessionClient } from "./client.js";
import { render } from "./dom.js";

function start(): void {
  const params = new URLSearchParams(window.location.search);
  const session = params.get("session");
  const user = params.get("user") ?? "guest";
  const server = params.get("server") ?? window.location.host;
  const root = document.getElementById("app");
  if (!root) return;
  if (!session) {
    root.textContent = "missing ?session=<id> in the URL";
    return;
  }
  const client = new SessionClient({
    baseUrl: `ws://${server}`,
    session,
    token: user,
    actor: user,
    socketFactory: (url) => new WebSocket(url) as any,
  });
  const actions = {
    send(type: any, payload: Record<string, unknown>) {
      client.send(type, payload);
    },
  };
  const rerender = () => render(root, client.viewModel(), actions);
  client.onChange(rerender);
  // recency classes and the rotation countdown re-evaluate on a local tick
  window.setInterval(rerender, 1000);
  client.connect();
}

start();
