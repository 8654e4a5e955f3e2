// Application shell: keeps the session id in the URL hash so a refresh
// rebuilds the whole view from GET /sessions/{id}.

import { SessionApi } from "./api.js";
import { renderApp } from "./render.js";
import { AppController } from "./state.js";

export function bootstrap(root: HTMLElement, base = ""): AppController {
  const app = new AppController(new SessionApi(base));
  app.subscribe((state) => {
    renderApp(root, state, app);
    if (state.resource && !window.location.hash.includes(state.resource.id)) {
      window.location.hash = `#/session/${state.resource.id}`;
    }
  });

  const match = window.location.hash.match(/^#\/session\/([0-9a-f]+)$/);
  if (match && match[1]) {
    void app.load(match[1]);
  } else {
    renderApp(root, app.state, app);
  }
  return app;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap(document.getElementById("app") as HTMLElement);
}
