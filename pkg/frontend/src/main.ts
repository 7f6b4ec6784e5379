/** Browser entry point: mount the explorer against a qmut service.
 *
 * The service address comes from the `?api=` query parameter, then from
 * `window.QMUT_ADDR`, then falls back to the service's default address.
 */

import { QmutClient } from "./api.js";
import { mountExplorer } from "./app.js";

declare global {
  interface Window {
    QMUT_ADDR?: string;
  }
}

const DEFAULT_BASE = "http://127.0.0.1:8175";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  if (window.QMUT_ADDR) {
    return window.QMUT_ADDR.startsWith("http")
      ? window.QMUT_ADDR
      : `http://${window.QMUT_ADDR}`;
  }
  return DEFAULT_BASE;
}

const root = document.getElementById("app");
if (root) {
  mountExplorer(root, new QmutClient(apiBase()));
}
