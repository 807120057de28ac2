/** three.js implementation of the assembly viewports.
 *
 * Main window: the whole assembly, orbit/pan camera. Secondary window: the
 * selected part alone with its own independent camera. Camera state never
 * leaves the client. Falls back to box geometry when a mesh fails to load and
 * to a dormant mode when WebGL is unavailable.
 */

import * as THREE from "three";
import { GLTFLoader } from "three/addons/loaders/GLTFLoader.js";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";

import type { AssemblyView } from "./scene-port";
import type { Keyframe, Manifest } from "./types";

interface Viewport {
  scene: THREE.Scene;
  camera: THREE.PerspectiveCamera;
  renderer: THREE.WebGLRenderer;
  controls: OrbitControls;
}

function makeViewport(container: HTMLElement, cameraZ: number): Viewport | null {
  let renderer: THREE.WebGLRenderer;
  try {
    renderer = new THREE.WebGLRenderer({ antialias: true });
  } catch {
    return null; // headless environment; the view stays dormant
  }
  const width = container.clientWidth || 640;
  const height = container.clientHeight || 480;
  renderer.setSize(width, height);
  renderer.setPixelRatio(window.devicePixelRatio || 1);
  container.appendChild(renderer.domElement);

  const scene = new THREE.Scene();
  scene.background = new THREE.Color(0x10151c);
  scene.add(new THREE.AmbientLight(0xffffff, 0.7));
  const key = new THREE.DirectionalLight(0xffffff, 1.4);
  key.position.set(2, 3, 4);
  scene.add(key);
  scene.add(new THREE.GridHelper(2, 10, 0x2a3442, 0x1b222d));

  const camera = new THREE.PerspectiveCamera(50, width / height, 0.01, 100);
  camera.position.set(0.8, 0.6, cameraZ);
  const controls = new OrbitControls(camera, renderer.domElement);
  controls.target.set(0, 0.25, 0);
  controls.update();
  return { scene, camera, renderer, controls };
}

export class ThreeAssemblyView implements AssemblyView {
  private readonly parts = new Map<string, THREE.Group>();
  private readonly main: Viewport | null;
  private readonly secondary: Viewport | null;
  private secondaryPart: THREE.Group | null = null;
  private track: { frames: Keyframe[]; group: THREE.Group; start: number; onDone: () => void } | null =
    null;
  private disposed = false;

  constructor(mainEl: HTMLElement, secondaryEl: HTMLElement) {
    this.main = makeViewport(mainEl, 1.6);
    this.secondary = makeViewport(secondaryEl, 0.9);
    this.animate = this.animate.bind(this);
    if (this.main) requestAnimationFrame(this.animate);
  }

  /** Load every part mesh (box fallback) and place it at its default pose. */
  async load(manifest: Manifest, assetUrl: (ref: string) => string): Promise<void> {
    const loader = new GLTFLoader();
    await Promise.all(
      manifest.assembly.parts.map(async (part) => {
        const group = new THREE.Group();
        group.name = part.part_number;
        let mesh: THREE.Object3D;
        try {
          const gltf = await loader.loadAsync(assetUrl(part.mesh_ref));
          mesh = gltf.scene;
        } catch {
          mesh = new THREE.Mesh(
            new THREE.BoxGeometry(0.15, 0.15, 0.15),
            new THREE.MeshStandardMaterial({ color: 0x8899aa }),
          );
        }
        mesh.traverse((obj) => {
          const asMesh = obj as THREE.Mesh;
          if (asMesh.isMesh) {
            const material = (asMesh.material as THREE.Material).clone();
            material.transparent = true;
            asMesh.material = material;
          }
        });
        group.add(mesh);
        const [x, y, z] = part.default_transform.position;
        const [qx, qy, qz, qw] = part.default_transform.rotation;
        group.position.set(x, y, z);
        group.quaternion.set(qx, qy, qz, qw);
        group.userData.homePosition = group.position.clone();
        group.userData.homeQuaternion = group.quaternion.clone();
        this.parts.set(part.part_number, group);
        this.main?.scene.add(group);
      }),
    );
  }

  applyOpacityMap(map: Record<string, number>): void {
    for (const [partNumber, group] of this.parts) {
      const opacity = map[partNumber] ?? 1.0;
      group.traverse((obj) => {
        const mesh = obj as THREE.Mesh;
        if (mesh.isMesh) {
          const material = mesh.material as THREE.Material & { opacity: number };
          material.opacity = opacity;
          material.depthWrite = opacity >= 1.0;
        }
      });
    }
  }

  setVisibleParts(parts: Set<string>): void {
    for (const [partNumber, group] of this.parts) {
      group.visible = parts.has(partNumber);
    }
  }

  playTrack(track: Keyframe[], onDone: () => void): void {
    this.stopTrack();
    if (!track.length) {
      onDone();
      return;
    }
    const group = this.parts.get(track[0].part_number);
    if (!group || !this.main) {
      onDone();
      return;
    }
    group.visible = true;
    this.track = { frames: track, group, start: performance.now(), onDone };
  }

  stopTrack(): void {
    if (this.track) {
      const { group } = this.track;
      const home = group.userData.homePosition as THREE.Vector3;
      const spin = group.userData.homeQuaternion as THREE.Quaternion;
      group.position.copy(home);
      group.quaternion.copy(spin);
      this.track = null;
    }
  }

  showSecondary(partNumber: string | null): void {
    if (!this.secondary) return;
    if (this.secondaryPart) {
      this.secondary.scene.remove(this.secondaryPart);
      this.secondaryPart = null;
    }
    if (partNumber === null) return;
    const source = this.parts.get(partNumber);
    if (!source) return;
    const clone = source.clone(true);
    clone.position.set(0, 0.25, 0);
    clone.quaternion.identity();
    clone.visible = true;
    clone.traverse((obj) => {
      const mesh = obj as THREE.Mesh;
      if (mesh.isMesh) {
        const material = (mesh.material as THREE.Material).clone();
        material.opacity = 1.0;
        mesh.material = material;
      }
    });
    this.secondaryPart = clone;
    this.secondary.scene.add(clone);
  }

  private stepTrack(nowMs: number): void {
    if (!this.track) return;
    const { frames, group, start, onDone } = this.track;
    const t = (nowMs - start) / 1000;
    const end = frames[frames.length - 1].time_s;
    let before = frames[0];
    let after = frames[frames.length - 1];
    for (let i = 0; i < frames.length - 1; i++) {
      if (t >= frames[i].time_s && t <= frames[i + 1].time_s) {
        before = frames[i];
        after = frames[i + 1];
        break;
      }
    }
    const span = after.time_s - before.time_s;
    const mix = span > 0 ? Math.min(Math.max((t - before.time_s) / span, 0), 1) : 1;
    const lerp = (a: number, b: number) => a + (b - a) * mix;
    if (t >= end) {
      group.position.set(...after.position);
      group.quaternion.set(...after.rotation).normalize();
      this.track = null;
      onDone();
      return;
    }
    group.position.set(
      lerp(before.position[0], after.position[0]),
      lerp(before.position[1], after.position[1]),
      lerp(before.position[2], after.position[2]),
    );
    const qa = new THREE.Quaternion(...before.rotation);
    const qb = new THREE.Quaternion(...after.rotation);
    group.quaternion.copy(qa.slerp(qb, mix));
  }

  private animate(nowMs: number): void {
    if (this.disposed) return;
    this.stepTrack(nowMs);
    if (this.main) {
      this.main.controls.update();
      this.main.renderer.render(this.main.scene, this.main.camera);
    }
    if (this.secondary) {
      this.secondary.controls.update();
      this.secondary.renderer.render(this.secondary.scene, this.secondary.camera);
    }
    requestAnimationFrame(this.animate);
  }

  dispose(): void {
    this.disposed = true;
    this.main?.renderer.dispose();
    this.secondary?.renderer.dispose();
  }
}
