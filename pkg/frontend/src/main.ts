/** Browser bootstrap: pick a course/procedure, create or resume the session
 * (the id is kept in localStorage so a reload lands back in the same
 * server-side session), load the 3D assembly and mount the app. */

import { ApiClient, ApiError } from "./api";
import { TraineeApp } from "./app";
import { HeadlessAssemblyView } from "./scene-port";
import { ThreeAssemblyView } from "./scene";
import { SessionStore } from "./state";

function storageKey(courseId: string, procedureId: string): string {
  return `mtrain-session:${courseId}:${procedureId}`;
}

async function openStore(
  api: ApiClient,
  courseId: string,
  procedureId: string,
): Promise<SessionStore> {
  const remembered = localStorage.getItem(storageKey(courseId, procedureId));
  if (remembered) {
    try {
      return await SessionStore.resume(api, remembered);
    } catch (error) {
      if (!(error instanceof ApiError && error.status === 404)) throw error;
      localStorage.removeItem(storageKey(courseId, procedureId));
    }
  }
  const store = await SessionStore.create(api, "trainee", courseId, procedureId);
  localStorage.setItem(storageKey(courseId, procedureId), store.sessionId);
  return store;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? "");

  const courses = await api.listCourses();
  if (!courses.length) {
    root.textContent = "No courses are being served.";
    return;
  }
  const course =
    courses.find((c) => c.course_id === params.get("course")) ?? courses[0];
  const procedure =
    course.procedures.find((p) => p.procedure_id === params.get("procedure")) ??
    course.procedures.find((p) => p.direction === "INSTALLATION") ??
    course.procedures[0];

  const store = await openStore(api, course.course_id, procedure.procedure_id);
  new TraineeApp(root, store, (mainWindow, secondaryCanvas) => {
    try {
      const view = new ThreeAssemblyView(mainWindow, secondaryCanvas);
      void view.load(store.manifest, (ref) => api.assetUrl(course.course_id, ref));
      return view;
    } catch {
      return new HeadlessAssemblyView();
    }
  });
}

void boot().catch((error) => {
  const root = document.getElementById("app");
  if (root) root.textContent = `Failed to start: ${error}`;
});
