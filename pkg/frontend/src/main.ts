import { Client } from "./api.js";
import { renderApp } from "./render.js";
import { Store } from "./store.js";

const base =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8750";

const store = new Store(new Client(base));
const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
renderApp(store, root);
void store.refresh();
