/** Entry point: mount the console and open a blank session. */

import { buildApp } from "./app";
import { Gateway } from "./gateway";

const mount = document.getElementById("app");
if (mount) {
  // Same-origin by default; serve the bundle behind the same host as the
  // API (e.g. a reverse proxy), or set data-api-base on the mount node.
  const base = mount.dataset.apiBase ?? "";
  const app = buildApp(mount, new Gateway(base));
  app.start("blank");
}
