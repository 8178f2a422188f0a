import { renderViews } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "";
const root = document.getElementById("app");
if (root) {
  void renderViews(baseUrl, root);
}
